"""Reproducing-kernel sections of the plane Hilbert space and least-squares
fits with finite families of them.

The section centered at q0 is the series r -> sum_k alpha^k r^k conj(q0)^k / k!,
the slice exponential of alpha r conj(q0); on a common plane with real data
it collapses to e^{alpha r q0}.  Finite right-linear combinations of sections
are dense, which the fit routine probes at small scale: appending centers can
only lower the residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import ConditioningError
from .quaternion import (
    ImaginaryUnit,
    Quaternion,
    UNIT_I,
    left_mult_matrix,
    quat_conj_array,
    quat_mul_array,
)
from .series import SliceSeries, evaluate, extended, from_generator
from .approx import parseval_log_weights


def kernel_section(q0: Quaternion, alpha: float, degree: int = 24) -> SliceSeries:
    """Series of the kernel section centered at q0 with weight alpha."""
    tag = (f"kernel-section:{q0.w!r},{q0.x!r},{q0.y!r},{q0.z!r},{float(alpha)!r}")
    return from_generator(tag, degree)


def kernel_eval(q0: Quaternion, alpha: float, r: Quaternion) -> Quaternion:
    """Value of the section at r: sum_k alpha^k r^k conj(q0)^k / k!.

    Reduces to the scalar exponential e^{alpha r q0} when both arguments are
    real, and to the one-plane exponential kernel when they share a plane.
    """
    return evaluate(kernel_section(q0, alpha), r)


@dataclass(frozen=True)
class SectionFit:
    """Least-squares combination of kernel sections."""

    coefficients: tuple[Quaternion, ...]
    residual: float
    condition: float


def _common_degree(sections, f: SliceSeries, alpha: float) -> int:
    deg = f.degree
    for s in sections:
        se, _ = parseval_log_weights(s, alpha)
        deg = max(deg, se.degree)
    fe, _ = parseval_log_weights(f, alpha)
    return max(deg, fe.degree)


def fit_with_sections(f: SliceSeries, centers, alpha: float,
                      unit: ImaginaryUnit = UNIT_I,
                      cond_limit: float = 1e12) -> SectionFit:
    """Minimize the plane Hilbert distance from f to right combinations
    sum_k section(q_k) b_k (p = 2; the coefficient representation makes the
    problem a finite quaternion least-squares system).

    Clustered centers produce genuinely ill-conditioned Gram matrices; past
    ``cond_limit`` this raises :class:`ConditioningError` rather than
    regularize silently.  The residual can only decrease as centers are
    appended.  ``unit`` labels the plane; the p = 2 value is the same on all
    of them.
    """
    centers = list(centers)
    if not centers:
        raise ValueError("need at least one center")
    if len(set((c.w, c.x, c.y, c.z) for c in centers)) != len(centers):
        raise ValueError("centers must be distinct")
    sections = [kernel_section(c, alpha) for c in centers]
    deg = _common_degree(sections, f, alpha)
    fe = extended(f, deg)
    smats = np.stack([extended(s, deg).coeffs for s in sections])   # (N, D+1, 4)
    k = np.arange(deg + 1)
    weights = np.exp(gammaln(k + 1.0) - k * math.log(alpha))        # k! / alpha^k

    n = len(centers)
    gram = np.zeros((4 * n, 4 * n))
    rhs = np.zeros(4 * n)
    for i in range(n):
        gi = np.sum(weights[:, None] *
                    quat_mul_array(quat_conj_array(smats[i]), fe.coeffs), axis=0)
        rhs[4 * i: 4 * i + 4] = gi
        for j in range(n):
            gij = np.sum(weights[:, None] *
                         quat_mul_array(quat_conj_array(smats[i]), smats[j]),
                         axis=0)
            block = left_mult_matrix(Quaternion.from_array(gij))
            gram[4 * i: 4 * i + 4, 4 * j: 4 * j + 4] = block

    cond = float(np.linalg.cond(gram))
    if not np.isfinite(cond) or cond > cond_limit:
        raise ConditioningError(
            f"section Gram matrix nearly singular (cond {cond:.3g}); "
            "centers too clustered", condition=cond)
    sol = np.linalg.solve(gram, rhs)
    coeffs = tuple(Quaternion.from_array(sol[4 * i: 4 * i + 4]) for i in range(n))

    combo = np.einsum("nkc->kc", np.stack([
        quat_mul_array(smats[i], np.broadcast_to(sol[4 * i: 4 * i + 4],
                                                 (deg + 1, 4)))
        for i in range(n)]))
    resid_coeffs = fe.coeffs - combo
    resid_sq = float(np.sum(weights * np.sum(resid_coeffs ** 2, axis=1)))
    return SectionFit(coeffs, math.sqrt(max(resid_sq, 0.0)), cond)
