"""Convolution polynomial operators as multiplier actions on Taylor coefficients.

Rotating the argument inside a power q^k multiplies it by a plane rotation:
(q e^{u t})^k = q^k e^{u k t} when u is the axis of q.  Averaging such
rotations against an even probability kernel K therefore scales each
coefficient by the real cosine moment int cos(k t) K(t) dt, so every
operator here is a finite real multiplier sequence rho_k applied as
a_k -> rho_k a_k.  The rotational integral itself survives only as a test
oracle; the multiplier form is exact up to the 1D moment quadrature.

Two kernel families are provided: the nonnegative even polynomial kernel
(sin(n t / 2) / sin(t / 2))^(2 r) normalized to unit integral, with r = 1
the classical cesaro-mean (triangular multiplier) case, and its delayed
combination v_k = 2 rho_{2n,k} - rho_{n,k} which reproduces all polynomials
of degree up to n.  The smoothing-difference operator combines rotated
samples with alternating binomial weights and matches moduli of smoothness
of the corresponding order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quadrature import circle_nodes
from .series import SliceSeries, extended

#: Switch to the series form of sin(n t / 2) / sin(t / 2) below this |t|.
_SINGULARITY_GUARD = 1e-6


@dataclass(frozen=True)
class TrigKernel:
    """Even nonnegative trigonometric kernel on [-pi, pi] with unit integral.

    family "fejer" is (sin(n t/2) / sin(t/2))^2 / (2 pi n), of trigonometric
    degree n - 1; family "jackson" is the 2r-th power with a numerically
    normalized constant, of degree r (n - 1).
    """

    family: str
    n: int
    r: int = 1
    lam: float = 0.0

    @property
    def trig_degree(self) -> int:
        return self.r * (self.n - 1)


def _sin_ratio(n: int, t: np.ndarray) -> np.ndarray:
    """sin(n t / 2) / sin(t / 2) with the removable singularity at t = 0
    evaluated by its even series (value n at t = 0)."""
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    small = np.abs(t) < _SINGULARITY_GUARD
    ts = t[small] * 0.5
    n2 = float(n * n)
    out[small] = n * (1.0 + (1.0 - n2) * ts ** 2 / 6.0
                      + (n2 * n2 / 120.0 - n2 / 36.0 + 7.0 / 360.0) * ts ** 4)
    tb = t[~small]
    out[~small] = np.sin(0.5 * n * tb) / np.sin(0.5 * tb)
    return out


def fejer_kernel(n: int) -> TrigKernel:
    if n < 1:
        raise ValueError("kernel degree parameter must be at least 1")
    return TrigKernel("fejer", n, 1, 2.0 * math.pi * n)


def normalize_jackson(n: int, r: int) -> float:
    """Normalization constant: the integral of the unnormalized 2r-th power
    kernel, computed on an alias-safe periodic grid."""
    if n < 1 or r < 1:
        raise ValueError("kernel parameters must be at least 1")
    nodes = _moment_nodes(n, r)
    t = circle_nodes(nodes)
    vals = _sin_ratio(n, t) ** (2 * r)
    return float(vals.sum() * (2.0 * math.pi / nodes))


def jackson_kernel(n: int, r: int) -> TrigKernel:
    return TrigKernel("jackson", n, r, normalize_jackson(n, r))


def kernel_eval(kernel: TrigKernel, t) -> np.ndarray | float:
    """Kernel value(s) at t in [-pi, pi]."""
    scalar = np.isscalar(t)
    vals = _sin_ratio(kernel.n, np.atleast_1d(t)) ** (2 * kernel.r) / kernel.lam
    return float(vals[0]) if scalar else vals


def _moment_nodes(n: int, r: int, extra_degree: int = 0) -> int:
    # alias-safe for cos(k t) * kernel up to k = trig degree + extra_degree
    return max(8 * r * n, 2 * (r * (n - 1) + extra_degree) + 17)


def multipliers(kernel: TrigKernel) -> np.ndarray:
    """Cosine moments rho_k = int cos(k t) K(t) dt for k = 0 .. trig degree.

    Sine moments vanish by evenness; rho_0 = 1 because the kernel is a
    probability density.  Applying the sequence to coefficients reproduces
    the rotational-average operator exactly.
    """
    deg = kernel.trig_degree
    nodes = _moment_nodes(kernel.n, kernel.r, extra_degree=deg)
    t = circle_nodes(nodes)
    kv = kernel_eval(kernel, t)
    ang = np.outer(np.arange(deg + 1), t)
    return (np.cos(ang) @ kv) * (2.0 * math.pi / nodes)


@dataclass(frozen=True)
class MultiplierOperator:
    """Diagonal action a_k -> rho_k a_k on right Taylor coefficients.

    The multipliers are real, so the action commutes with right scalar
    multiplication; entries beyond ``degree_bound`` are zero and the result
    of applying the operator is a polynomial of at most that degree.
    """

    rho: np.ndarray
    provenance: str
    degree_bound: int

    def __post_init__(self):
        arr = np.ascontiguousarray(np.asarray(self.rho, dtype=float))
        arr.setflags(write=False)
        object.__setattr__(self, "rho", arr)


def fejer_op(n: int) -> MultiplierOperator:
    rho = multipliers(fejer_kernel(n))
    return MultiplierOperator(rho, f"fejer:{n}", n - 1)


def vdp_op(n: int) -> MultiplierOperator:
    """Delayed-mean multipliers v_k = 2 rho_{2n,k} - rho_{n,k}.

    v_k = 1 exactly for k <= n (the triangular moments cancel term by term),
    so polynomials of degree up to n are reproduced coefficientwise; the
    result degree is bounded by 2n - 1.  The leading ones are pinned to the
    closed-form value rather than left to moment-quadrature roundoff.
    """
    big = multipliers(fejer_kernel(2 * n))        # length 2n
    small = multipliers(fejer_kernel(n))          # length n
    v = 2.0 * big
    v[: small.size] -= small
    v[: n + 1] = 1.0
    return MultiplierOperator(v, f"vdp:{n}", 2 * n - 1)


def jackson_rule_r(m: int, p: float) -> int:
    """Smallest integer r with r >= (p (m + 1) + 2) / 2."""
    return math.ceil((p * (m + 1) + 2.0) / 2.0 - 1e-12)


def jackson_op(n: int, m: int, p: float) -> MultiplierOperator:
    """Multipliers of the smoothing-difference operator of order m + 1.

    tau_j = -sum_{k=1}^{m+1} (-1)^k C(m+1, k) c_{j k} with
    c_{j k} = int cos(j k t) K_{n,r}(t) dt and r from :func:`jackson_rule_r`;
    tau_0 = 1 and tau_j = 0 beyond r (n - 1).
    """
    if m < 0:
        raise ValueError("difference order m must be nonnegative")
    if p < 1.0:
        raise ValueError("the smoothing-difference operator needs p >= 1")
    r = jackson_rule_r(m, p)
    kernel = jackson_kernel(n, r)
    deg = kernel.trig_degree
    nodes = _moment_nodes(n, r, extra_degree=deg * (m + 1))
    t = circle_nodes(nodes)
    kv = kernel_eval(kernel, t)
    ks = np.arange(1, m + 2)
    signs = np.array([-((-1.0) ** k) * math.comb(m + 1, k) for k in ks])
    tau = np.zeros(deg + 1)
    for k, s in zip(ks, signs):
        ang = np.outer(np.arange(deg + 1) * k, t)
        tau += s * ((np.cos(ang) @ kv) * (2.0 * math.pi / nodes))
    return MultiplierOperator(tau, f"jackson:{n}:{m}:r{r}", deg)


def apply(op: MultiplierOperator, f: SliceSeries) -> SliceSeries:
    """Coefficientwise product rho_k a_k; the result is a polynomial of
    degree at most the operator bound.  Commutes with dilation."""
    bound = op.degree_bound
    fe = extended(f, bound) if f.generator is not None else f
    m = min(bound + 1, fe.coeffs.shape[0])
    out = np.zeros((bound + 1, 4))
    out[:m] = op.rho[:m, None] * fe.coeffs[:m]
    return SliceSeries(out)


def rotational_average(kernel: TrigKernel, f: SliceSeries, q,
                       n_nodes: int | None = None):
    """Direct evaluation of the rotational integral
    int f(q e^{u t}) K(t) dt with u the axis of q (test oracle for
    :func:`multipliers`; the multiplier action must agree with it)."""
    from .quaternion import Quaternion, slice_unit
    from .series import eval_on_slice, prepared_for_radius

    nodes = n_nodes or _moment_nodes(kernel.n, kernel.r)
    t = circle_nodes(nodes)
    kv = kernel_eval(kernel, t)
    unit, _ = slice_unit(q)
    theta = math.atan2(q.imag_norm(), q.w)
    z = abs(q) * np.exp(1j * (theta + t))
    fe, _ = prepared_for_radius(f, abs(q))
    vals = eval_on_slice(fe, unit, z, prepare=False)
    comps = (kv * (2.0 * math.pi / nodes)) @ vals
    return Quaternion.from_array(comps)


def moment_bound(n: int, m: int, p: float, n_nodes: int | None = None) -> float:
    """int (n |t| + 1)^{(m+1) p} K_{n,r}(t) dt with r from the rule.

    Finite uniformly in n; swept over n this stays within a constant factor,
    which is what makes the smoothing-difference estimate work.
    """
    r = jackson_rule_r(m, p)
    kernel = jackson_kernel(n, r)
    nodes = n_nodes or max(_moment_nodes(n, r), 4096)
    t = circle_nodes(nodes)
    kv = kernel_eval(kernel, t)
    weight = (n * np.abs(t) + 1.0) ** ((m + 1) * p)
    return float((weight * kv).sum() * (2.0 * math.pi / nodes))
