"""Gaussian-weighted integral norms of slice-regular series, of two kinds.

The first kind weighs |f|^p e^{-p alpha |q|^2 / 2} over the whole algebra
with prefactor (alpha p / 2 pi)^2; the second kind weighs the same density
over a single complex plane with prefactor alpha p / 2 pi, optionally taking
the sup over planes (realized as a max over a deterministic sphere sample).
On a fixed plane the monomials are orthogonal, with
|| q^k ||^2 = k! / alpha^k at p = 2; over the whole algebra they are not:
powers whose degrees differ by exactly two overlap.

Membership is decided numerically: the radial profile of the weighted
integrand must decay toward the grid boundary and the value must be stable
under grid refinement, otherwise the function is reported as outside the
space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import IntegrandOverflowError, NotInSpaceError, TruncationError
from .prng import SplitMix64
from .quaternion import (
    ImaginaryUnit,
    Quaternion,
    UNIT_I,
    quat_conj_array,
    quat_mul_array,
    sphere_grid,
)
from .quadrature import (
    DEFAULT_ANGULAR,
    DEFAULT_RADIAL,
    DEFAULT_SPHERE,
    DEFAULT_VOLUME_ANGULAR,
    QuadratureGrid,
    refined,
    slice_grid,
    volume_grid,
)
from .series import (
    SliceSeries,
    _log_abs_on_circle,
    eval_on_slice,
    evaluate,
    prepared_for_radius,
    underflow_drop_logs,
)

#: A certified truncation or underflow tail may contribute at most this
#: relative amount to a reported norm.
NORM_TAIL_BUDGET = 1e-10

#: Sphere sample size used to realize the sup over planes.
DEFAULT_SUP_SAMPLES = 32

#: Relative growth under grid refinement beyond which a norm counts as divergent.
DIVERGENCE_GROWTH = 1e-2


@dataclass(frozen=True)
class NormSpec:
    """Which weighted norm to evaluate.

    kind "first" integrates over the whole algebra; kind "second" over one
    plane, identified by ``slice_unit``, or as a max over ``sup_samples``
    sampled planes when that is set instead.
    """

    kind: str
    p: float
    alpha: float
    slice_unit: ImaginaryUnit | None = None
    sup_samples: int | None = None

    def __post_init__(self):
        if self.kind not in ("first", "second"):
            raise ValueError(f"kind must be 'first' or 'second', got {self.kind!r}")
        if not self.p > 0.0:
            raise ValueError("exponent p must be positive")
        if not self.alpha > 0.0:
            raise ValueError("weight parameter alpha must be positive")
        if self.kind == "second":
            if self.slice_unit is not None and self.sup_samples is not None:
                raise ValueError("give either a slice unit or a sup sampling count")
            if self.slice_unit is None and self.sup_samples is None:
                object.__setattr__(self, "slice_unit", UNIT_I)
        else:
            if self.slice_unit is not None or self.sup_samples is not None:
                raise ValueError("first-kind norms take no slice policy")

    @property
    def scale(self) -> float:
        """Radial decay rate of the weighted integrand, alpha p / 2."""
        return self.alpha * self.p / 2.0

    def slice_label(self) -> str | None:
        if self.kind == "first":
            return None
        if self.sup_samples is not None:
            return f"sup:{self.sup_samples}"
        u = self.slice_unit
        for name, ref in (("i", (1, 0, 0)), ("j", (0, 1, 0)), ("k", (0, 0, 1))):
            if (u.x, u.y, u.z) == ref:
                return name
        return f"{u.x!r},{u.y!r},{u.z!r}"


@dataclass(frozen=True)
class NormReport:
    """Norm value with the numerical evidence behind it."""

    value: float
    kind: str
    p: float
    alpha: float
    slice_label: str | None
    grid_sizes: tuple[int, ...]
    tail_bound: float
    stability: float

    def to_record(self) -> dict:
        return {
            "kind": self.kind,
            "p": self.p,
            "alpha": self.alpha,
            "slice": self.slice_label,
            "value": self.value,
            "grid": list(self.grid_sizes),
            "tail_bound": self.tail_bound,
        }


def default_grid(spec: NormSpec, n_radial: int | None = None,
                 n_angular: int | None = None,
                 n_sphere: int | None = None) -> QuadratureGrid:
    if spec.kind == "second":
        return slice_grid(spec.scale, n_radial or DEFAULT_RADIAL,
                          n_angular or DEFAULT_ANGULAR)
    return volume_grid(spec.scale, n_radial or DEFAULT_RADIAL,
                       n_angular or DEFAULT_VOLUME_ANGULAR,
                       n_sphere or DEFAULT_SPHERE)


def _weighted_amplitude(f: SliceSeries, unit: ImaginaryUnit, z: np.ndarray,
                        alpha: float) -> np.ndarray:
    """|f| e^{-alpha |z|^2 / 2} at plane points z, assembled before any power
    is taken so growth-bounded functions never overflow."""
    vals = eval_on_slice(f, unit, z, prepare=False)
    amp = np.sqrt(np.sum(np.square(vals), axis=1))
    return amp * np.exp(-0.5 * alpha * np.abs(z) ** 2)


def _check_tail_budget(raw: float, delta: float, p: float) -> None:
    """The evaluation-error contribution ``delta`` to the raw p-th power must
    stay below NORM_TAIL_BUDGET of the result (norm scale: raw / p)."""
    if not math.isfinite(delta) or delta > NORM_TAIL_BUDGET * max(raw, 1e-300) * p:
        raise TruncationError(
            "truncated-tail contribution bound exceeds "
            f"{NORM_TAIL_BUDGET:g} of the result")


def _slice_raw_power(f: SliceSeries, unit: ImaginaryUnit, grid: QuadratureGrid,
                     p: float, alpha: float,
                     err_logs: np.ndarray | None = None
                     ) -> tuple[float, np.ndarray]:
    """Raw integral of (|f| w_alpha)^p over the plane plus its radial profile.

    ``err_logs`` optionally bounds (log scale, per radial node) the pointwise
    evaluation error of f; its weighted contribution is checked against the
    norm tail budget.
    """
    z = np.outer(grid.radial_nodes, np.exp(1j * grid.angular_nodes))
    amp = _weighted_amplitude(f, unit, z.ravel(), alpha).reshape(z.shape)
    integ = amp ** p
    if not np.all(np.isfinite(integ)):
        bad = np.argwhere(~np.isfinite(integ))[0]
        raise IntegrandOverflowError(
            f"integrand overflow at node {z[tuple(bad)]!r}", node=z[tuple(bad)])
    shell = integ @ grid.angular_weights
    profile = grid.radial_weights * shell
    raw = float(np.sum(profile))
    delta_total = 0.0
    if err_logs is not None and np.any(err_logs > -math.inf):
        damped = np.exp(err_logs - 0.5 * alpha * grid.radial_nodes ** 2)
        delta = ((amp + damped[:, None]) ** p - integ) @ grid.angular_weights
        delta_total = float(np.dot(grid.radial_weights, delta))
    return raw, profile, delta_total


def _volume_raw_power(f: SliceSeries, grid: QuadratureGrid,
                      p: float, alpha: float,
                      err_logs: np.ndarray | None = None
                      ) -> tuple[float, np.ndarray]:
    z = np.outer(grid.radial_nodes, np.exp(1j * grid.angular_nodes))
    zr = z.ravel()
    profile = np.zeros(grid.radial_nodes.size)
    delta_total = 0.0
    check_err = err_logs is not None and np.any(err_logs > -math.inf)
    for u, wu in zip(grid.sphere_units, grid.sphere_weights):
        unit = ImaginaryUnit(u[0], u[1], u[2])
        amp = _weighted_amplitude(f, unit, zr, alpha).reshape(z.shape)
        integ = amp ** p
        if not np.all(np.isfinite(integ)):
            bad = np.argwhere(~np.isfinite(integ))[0]
            raise IntegrandOverflowError(
                f"integrand overflow at node {z[tuple(bad)]!r}", node=z[tuple(bad)])
        profile += wu * grid.radial_weights * (integ @ grid.angular_weights)
        if check_err:
            damped = np.exp(err_logs - 0.5 * alpha * grid.radial_nodes ** 2)
            delta = ((amp + damped[:, None]) ** p - integ) @ grid.angular_weights
            delta_total += wu * float(np.dot(grid.radial_weights, delta))
    raw = float(np.sum(profile))
    return raw, profile, delta_total


def _profile_rising(profile: np.ndarray) -> bool:
    """A weighted radial profile whose largest shell sits at the boundary
    signals a divergent integral (members decay toward the boundary)."""
    if profile.size < 4 or not np.any(profile > 0.0):
        return False
    return int(np.argmax(profile)) >= profile.size - 2


def _norm_value(f: SliceSeries, spec: NormSpec, grid: QuadratureGrid
                ) -> tuple[float, bool, float]:
    """Returns (value, boundary_flag, tail_bound)."""
    fe, tail = prepared_for_radius(f, grid.max_radius, drop_ok=True)
    err_logs = underflow_drop_logs(fe, grid.radial_nodes)
    pref = spec.alpha * spec.p / (2.0 * math.pi)
    if spec.kind == "first":
        raw, profile, delta = _volume_raw_power(fe, grid, spec.p, spec.alpha,
                                                err_logs)
        value = (pref * pref * raw) ** (1.0 / spec.p)
        rising = _profile_rising(profile)
        if not rising:
            # a diverging integrand outranks the tail budget
            _check_tail_budget(raw, delta, spec.p)
        return value, rising, tail
    if spec.sup_samples is not None:
        units = sphere_grid(spec.sup_samples)
    else:
        units = (spec.slice_unit,)
    best = 0.0
    rising = False
    worst_ratio = 0.0
    for unit in units:
        raw, profile, delta = _slice_raw_power(fe, unit, grid, spec.p,
                                               spec.alpha, err_logs)
        rising = rising or _profile_rising(profile)
        best = max(best, (pref * raw) ** (1.0 / spec.p))
        worst_ratio = max(worst_ratio, delta / (spec.p * max(raw, 1e-300)))
    if not rising and worst_ratio > NORM_TAIL_BUDGET:
        raise TruncationError(
            "truncated-tail contribution bound exceeds "
            f"{NORM_TAIL_BUDGET:g} of the result")
    return best, rising, tail


def norm(f: SliceSeries, spec: NormSpec, grid: QuadratureGrid | None = None) -> float:
    """Weighted norm of f under ``spec`` on the given (or default) grid.

    Raises :class:`NotInSpaceError` when the radial profile of the weighted
    integrand rises toward the grid boundary, the signature of a divergent
    integral.  Use :func:`norm_report` for the refinement-stability gate.
    """
    grid = grid or default_grid(spec)
    value, rising, _ = _norm_value(f, spec, grid)
    if rising or not math.isfinite(value):
        raise NotInSpaceError(
            "weighted integrand grows toward the grid boundary: not in the space")
    return value


def norm_report(f: SliceSeries, spec: NormSpec,
                grid: QuadratureGrid | None = None) -> NormReport:
    """Norm with divergence and grid-stability checks.

    Evaluates on the base grid and once more with all node counts doubled;
    reports the refined value and the relative deviation.  A rising radial
    profile or growth beyond ``DIVERGENCE_GROWTH`` under refinement raises
    :class:`NotInSpaceError`.
    """
    grid = grid or default_grid(spec)
    v1, rising, tail1 = _norm_value(f, spec, grid)
    if rising or not math.isfinite(v1):
        raise NotInSpaceError(
            "weighted integrand grows toward the grid boundary: not in the space")
    fine = refined(grid)
    v2, rising2, tail2 = _norm_value(f, spec, fine)
    if rising2 or not math.isfinite(v2):
        raise NotInSpaceError(
            "weighted integrand grows toward the refined grid boundary: "
            "not in the space")
    if v2 > v1 * (1.0 + DIVERGENCE_GROWTH):
        raise NotInSpaceError(
            f"norm grows under grid refinement ({v1:.6g} -> {v2:.6g}): "
            "not in the space")
    stability = abs(v2 - v1) / max(abs(v2), 1e-300)
    return NormReport(
        value=v2,
        kind=spec.kind,
        p=spec.p,
        alpha=spec.alpha,
        slice_label=spec.slice_label(),
        grid_sizes=fine.sizes,
        tail_bound=max(tail1, tail2),
        stability=stability,
    )


# ---------------------------------------------------------------------------
# inner products (p = 2)

def inner_second(f: SliceSeries, g: SliceSeries, alpha: float,
                 unit: ImaginaryUnit = UNIT_I,
                 grid: QuadratureGrid | None = None) -> Quaternion:
    """Plane inner product (alpha/pi) int conj(f) g e^{-alpha |z|^2} dm.

    Normalized so that <f, f> equals the squared second-kind norm at p = 2;
    the rescaled monomials e_k = sqrt(alpha^k / k!) q^k come out orthonormal.
    """
    grid = grid or slice_grid(alpha)
    z = np.outer(grid.radial_nodes, np.exp(1j * grid.angular_nodes)).ravel()
    w = np.outer(grid.radial_weights, grid.angular_weights).ravel()
    fe, _ = prepared_for_radius(f, grid.max_radius)
    ge, _ = prepared_for_radius(g, grid.max_radius)
    half = np.exp(-0.5 * alpha * np.abs(z) ** 2)[:, None]
    fv = eval_on_slice(fe, unit, z, prepare=False) * half
    gv = eval_on_slice(ge, unit, z, prepare=False) * half
    prod = quat_mul_array(quat_conj_array(fv), gv)
    comps = w @ prod
    return Quaternion.from_array(comps * (alpha / math.pi))


def inner_first(f: SliceSeries, g: SliceSeries, alpha: float,
                grid: QuadratureGrid | None = None) -> Quaternion:
    """Whole-algebra inner product (alpha/pi)^2 int conj(f) g e^{-alpha |q|^2} dm.

    Monomials q^m, q^n are orthogonal here only when |m - n| is odd or at
    least 4; degrees differing by two genuinely overlap.
    """
    grid = grid or volume_grid(alpha)
    z = np.outer(grid.radial_nodes, np.exp(1j * grid.angular_nodes)).ravel()
    wq = np.outer(grid.radial_weights, grid.angular_weights).ravel()
    fe, _ = prepared_for_radius(f, grid.max_radius)
    ge, _ = prepared_for_radius(g, grid.max_radius)
    half = np.exp(-0.5 * alpha * np.abs(z) ** 2)[:, None]
    comps = np.zeros(4)
    for u, wu in zip(grid.sphere_units, grid.sphere_weights):
        unit = ImaginaryUnit(u[0], u[1], u[2])
        fv = eval_on_slice(fe, unit, z, prepare=False) * half
        gv = eval_on_slice(ge, unit, z, prepare=False) * half
        prod = quat_mul_array(quat_conj_array(fv), gv)
        comps += wu * (wq @ prod)
    return Quaternion.from_array(comps * (alpha / math.pi) ** 2)


# ---------------------------------------------------------------------------
# growth bound, norm equivalence, embedding

@dataclass(frozen=True)
class GrowthBoundReport:
    constant: float
    norm_value: float
    max_ratio: float
    worst_point: Quaternion
    violations: tuple[Quaternion, ...]

    @property
    def passed(self) -> bool:
        return not self.violations


def growth_constant(spec: NormSpec) -> float:
    """Pointwise growth constant: 4 (2 pi / alpha p)^(1/p) over the whole
    algebra, plain 4 for the sup-over-planes norm."""
    if spec.kind == "first":
        return 4.0 * (2.0 * math.pi / (spec.alpha * spec.p)) ** (1.0 / spec.p)
    return 4.0


def growth_bound_check(f: SliceSeries, spec: NormSpec, samples,
                       grid: QuadratureGrid | None = None) -> GrowthBoundReport:
    """Check |f(q)| <= c e^{alpha |q|^2 / 2} ||f|| on the sample points.

    Reports the largest observed ratio |f(q)| e^{-alpha |q|^2 / 2} / ||f||
    and every violating point.
    """
    nval = norm(f, spec, grid)
    c = growth_constant(spec)
    if nval == 0.0:
        return GrowthBoundReport(c, 0.0, 0.0, Quaternion(), ())
    max_ratio = -1.0
    worst = Quaternion()
    bad = []
    for q in samples:
        ratio = abs(evaluate(f, q)) * math.exp(-0.5 * spec.alpha * q.norm_sq()) / nval
        if ratio > max_ratio:
            max_ratio, worst = ratio, q
        if ratio > c * (1.0 + 1e-12):
            bad.append(q)
    return GrowthBoundReport(c, nval, max_ratio, worst, tuple(bad))


def sample_ball(count: int, radius: float, seed: int) -> list[Quaternion]:
    """Deterministic uniform sample of the closed 4-ball (rejection from the
    cube, SplitMix64 stream)."""
    gen = SplitMix64(seed)
    out = []
    while len(out) < count:
        c = [gen.next_symmetric() for _ in range(4)]
        if sum(v * v for v in c) <= 1.0:
            out.append(Quaternion(*(radius * v for v in c)))
    return out


def slice_norm_ratio(f: SliceSeries, p: float, alpha: float,
                     unit_i: ImaginaryUnit, unit_j: ImaginaryUnit,
                     grid: QuadratureGrid | None = None) -> float:
    """||f||_{p,alpha,I} / ||f||_{p,alpha,J}.

    Bounded by 2 for p >= 1 and by 2^(1/p) for 0 < p < 1; identically 1 for
    series with real coefficients and for p = 2.
    """
    spec_i = NormSpec("second", p, alpha, slice_unit=unit_i)
    spec_j = NormSpec("second", p, alpha, slice_unit=unit_j)
    num = norm(f, spec_i, grid)
    den = norm(f, spec_j, grid)
    if den == 0.0:
        raise ZeroDivisionError("slice norm ratio undefined: f has zero norm")
    return num / den


def embedding_check(h: SliceSeries, beta: float, alpha: float, p: float,
                    grid: QuadratureGrid | None = None,
                    ref_grid: QuadratureGrid | None = None) -> float:
    """Ratio ||h||_{p,alpha} / ||h||_{2,beta} over the whole algebra, the
    quantity bounded by the embedding constant for 0 < beta < alpha."""
    if not 0.0 < beta < alpha:
        raise ValueError("embedding requires 0 < beta < alpha")
    num = norm(h, NormSpec("first", p, alpha), grid)
    den = norm(h, NormSpec("first", 2.0, beta), ref_grid)
    if den == 0.0:
        raise ZeroDivisionError("embedding ratio undefined: f has zero norm")
    return num / den


# ---------------------------------------------------------------------------
# order and type

@dataclass(frozen=True)
class GrowthReport:
    """Entire-function growth estimates from max-modulus sampling."""

    order_estimate: float
    type_estimate: float | None
    radii: np.ndarray
    log_max_modulus: np.ndarray
    residual: float


def log_max_modulus(f: SliceSeries, radius: float, units=None,
                    n_theta: int = 64) -> float:
    """log max |f| over sampled directions at the given radius."""
    units = units if units is not None else sphere_grid(8)
    fe, _ = prepared_for_radius(f, radius)
    thetas = np.linspace(0.0, math.pi, n_theta)
    best = -math.inf
    for unit in units:
        vals = _log_abs_on_circle(fe, unit, radius, thetas)
        best = max(best, float(np.max(vals)))
    return best


def order_type(f: SliceSeries, radii=None, units=None,
               n_theta: int = 64) -> GrowthReport:
    """Estimate growth order and (near order 2) type from a radius sweep.

    The order comes from the least-squares slope of log log M(r) against
    log r on the outer half of the radius grid, a limsup-flavored window
    estimate; the type is the median of log M(r) / r^2 there and is only
    reported when the estimated order is within 0.1 of 2.
    """
    from .errors import TruncationError

    radii = np.asarray(radii if radii is not None else np.geomspace(2.0, 16.0, 10),
                       dtype=float)
    logs = []
    used = []
    for r in radii:
        try:
            logs.append(log_max_modulus(f, float(r), units, n_theta))
            used.append(float(r))
        except TruncationError:
            continue
    if len(used) < 4:
        raise ValueError("radius grid too large: tail control failed at nearly "
                         "all radii")
    used = np.asarray(used)
    logm = np.asarray(logs)
    half = len(used) // 2
    x = np.log(used[half:])
    y = np.log(logm[half:])
    if not np.all(np.isfinite(y)):
        raise ValueError("max modulus not positive enough for a growth fit")
    a = np.vstack([x, np.ones_like(x)]).T
    sol, *_ = np.linalg.lstsq(a, y, rcond=None)
    fit_residual = float(np.sqrt(np.mean((a @ sol - y) ** 2)))
    rho = float(sol[0])
    sigma = None
    if abs(rho - 2.0) <= 0.1:
        sigma = float(np.median(logm[half:] / used[half:] ** 2))
    return GrowthReport(rho, sigma, used, logm, fit_residual)
