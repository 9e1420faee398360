"""Independent numeric verification of the analytic pipeline.

Nothing here reuses the closed-form spectrum or eigenfunctions except as
the quantity under test: eigenvalues come from a finite-difference
Hamiltonian via Sturm-sequence bisection, inner products from adaptive
Simpson quadrature with certified tail cutoffs, and the transform is
re-computed by direct numerical integration of the defining integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .inversion import (
    Eigenfunction,
    XiPolynomial,
    _tail_cutoff,
    invert_transform,
    wavefunction_evaluator,
)
from .laplace_series import TransformSeries, eval_transform
from .units import Units


class OracleConvergenceError(RuntimeError):
    """A numeric routine failed to reach its requested tolerance."""


class GridError(ValueError):
    """The requested grid cannot honestly represent the requested states."""


@dataclass(frozen=True)
class OracleDefaults:
    """Default tolerances for the numeric routines, in one place."""

    quadrature_tol: float = 1e-10
    eigenvalue_tol: float = 1e-10
    laplace_tol: float = 1e-10
    inner_product_tol: float = 1e-11
    drift_tol: float = 1e-6
    grid_tail_bound: float = 1e-12
    xi_probe: float = 1e10


DEFAULTS = OracleDefaults()


# ---------------------------------------------------------------------------
# finite-difference Hamiltonian


@dataclass(frozen=True)
class Grid:
    """Uniform symmetric grid on [-half_width, half_width].

    ``points`` is odd so x = 0 is a node; spacing h = 2L/(points - 1).
    """

    half_width: float
    points: int
    spacing: float

    def nodes(self) -> list[float]:
        return [
            -self.half_width + i * self.spacing for i in range(self.points)
        ]

    def interior_nodes(self) -> list[float]:
        return [
            -self.half_width + i * self.spacing for i in range(1, self.points - 1)
        ]


def make_grid(
    half_width: float,
    points: int,
    units: Units,
    tail_bound: float = DEFAULTS.grid_tail_bound,
) -> Grid:
    """Validated grid: the Gaussian envelope at the box edge must be tiny.

    Dirichlet walls at +-L stand in for decay at infinity; the construction
    refuses grids where exp(-m omega L**2 / (2 hbar)) >= tail_bound, which
    would make that substitution dishonest.
    """
    if points < 3:
        raise GridError("need at least 3 points")
    if points % 2 == 0:
        raise GridError("points must be odd so x = 0 is a node")
    if not half_width > 0:
        raise GridError("half width must be positive")
    envelope = math.exp(-float(units.gaussian_rate_exact()) * half_width**2)
    if envelope >= tail_bound:
        raise GridError(
            f"box edge envelope {envelope:.3e} exceeds tail bound {tail_bound:.3e}; "
            "enlarge the grid"
        )
    spacing = 2.0 * half_width / (points - 1)
    return Grid(half_width=half_width, points=points, spacing=spacing)


@dataclass(frozen=True)
class TridiagonalOperator:
    """Symmetric tridiagonal matrix stored as diagonal and off-diagonal."""

    diagonal: tuple[float, ...]
    off_diagonal: tuple[float, ...]

    def __post_init__(self):
        if len(self.off_diagonal) != max(len(self.diagonal) - 1, 0):
            raise ValueError("off-diagonal length must be diagonal length - 1")

    @property
    def size(self) -> int:
        return len(self.diagonal)


def fd_hamiltonian(grid: Grid, units: Units) -> TridiagonalOperator:
    """Central-difference Hamiltonian on the interior nodes (Dirichlet walls).

    diag_i = hbar**2/(m h**2) + m omega**2 x_i**2 / 2,
    off    = -hbar**2/(2 m h**2).
    """
    h = grid.spacing
    kinetic = units.hbar**2 / (units.mass * h * h)
    off_value = -0.5 * kinetic
    diag = tuple(
        kinetic + 0.5 * units.mass * units.omega**2 * x * x
        for x in grid.interior_nodes()
    )
    off = tuple(off_value for _ in range(len(diag) - 1))
    return TridiagonalOperator(diagonal=diag, off_diagonal=off)


def eigenvalue_count_below(op: TridiagonalOperator, shift: float) -> int:
    """Number of eigenvalues strictly below ``shift`` (Sturm sequence count).

    Runs the standard LDL^T pivot recurrence; zero pivots are nudged to a
    tiny negative value, the conventional tie-break.
    """
    count = 0
    pivot = 1.0
    diag = op.diagonal
    off = op.off_diagonal
    for i in range(op.size):
        coupling = off[i - 1] ** 2 / pivot if i > 0 else 0.0
        pivot = diag[i] - shift - coupling
        if pivot == 0.0:
            pivot = -1e-300
        if pivot < 0.0:
            count += 1
    return count


def _gershgorin_bounds(op: TridiagonalOperator) -> tuple[float, float]:
    lo = math.inf
    hi = -math.inf
    for i, d in enumerate(op.diagonal):
        radius = 0.0
        if i > 0:
            radius += abs(op.off_diagonal[i - 1])
        if i < op.size - 1:
            radius += abs(op.off_diagonal[i])
        lo = min(lo, d - radius)
        hi = max(hi, d + radius)
    return lo, hi


def lowest_eigenvalues(
    op: TridiagonalOperator, count: int, tol: float = DEFAULTS.eigenvalue_tol
) -> list[float]:
    """The ``count`` smallest eigenvalues by bisection on the Sturm count.

    Each eigenvalue is bracketed to width < tol and returned ascending.
    Deterministic: the result is a pure function of the operator and tol.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if count > op.size:
        raise ValueError(f"operator has only {op.size} eigenvalues")
    if not tol > 0:
        raise ValueError("tol must be positive")
    global_lo, global_hi = _gershgorin_bounds(op)
    results = []
    lo_floor = global_lo
    for k in range(count):
        lo, hi = lo_floor, global_hi
        iterations = 0
        while hi - lo > tol:
            iterations += 1
            if iterations > 200:
                raise OracleConvergenceError(
                    f"bisection bracket for eigenvalue {k} failed to shrink "
                    f"below {hi - lo:.3e}"
                )
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                raise OracleConvergenceError(
                    f"bracket for eigenvalue {k} stalled at machine resolution"
                )
            if eigenvalue_count_below(op, mid) >= k + 1:
                hi = mid
            else:
                lo = mid
        value = 0.5 * (lo + hi)
        results.append(value)
        lo_floor = lo    # eigenvalues are returned in ascending order
    return results


def _solve_shifted(
    op: TridiagonalOperator, shift: float, rhs: list[float]
) -> list[float]:
    """Thomas solve of (T - shift I) w = rhs with tiny-pivot safeguarding."""
    n = op.size
    diag = [d - shift for d in op.diagonal]
    off = op.off_diagonal
    c_prime = [0.0] * n
    d_prime = [0.0] * n
    pivot = diag[0]
    if abs(pivot) < 1e-280:
        pivot = 1e-280
    c_prime[0] = off[0] / pivot if n > 1 else 0.0
    d_prime[0] = rhs[0] / pivot
    for i in range(1, n):
        pivot = diag[i] - off[i - 1] * c_prime[i - 1]
        if abs(pivot) < 1e-280:
            pivot = 1e-280
        if i < n - 1:
            c_prime[i] = off[i] / pivot
        d_prime[i] = (rhs[i] - off[i - 1] * d_prime[i - 1]) / pivot
    for i in range(n - 2, -1, -1):
        d_prime[i] -= c_prime[i] * d_prime[i + 1]
    return d_prime


def eigenvector(
    op: TridiagonalOperator, eigenvalue: float, index_hint: int = 0
) -> list[float]:
    """Unit eigenvector by inverse iteration at the given eigenvalue.

    ``index_hint`` seeds the start vector with the right oscillation count,
    which keeps the iteration deterministic and fast for low-lying states.
    """
    n = op.size
    wave = (index_hint + 1) * math.pi / (n + 1)
    v = [math.sin((i + 1) * wave) for i in range(n)]
    shift = eigenvalue + 1e-11 * (abs(eigenvalue) + 1.0)
    for _ in range(3):
        v = _solve_shifted(op, shift, v)
        norm = math.sqrt(sum(x * x for x in v))
        if norm == 0.0 or not math.isfinite(norm):
            raise OracleConvergenceError("inverse iteration broke down")
        v = [x / norm for x in v]
    peak = max(range(n), key=lambda i: abs(v[i]))
    if v[peak] < 0:
        v = [-x for x in v]
    return v


# ---------------------------------------------------------------------------
# quadrature


def quadrature(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = DEFAULTS.quadrature_tol,
    max_depth: int = 60,
) -> float:
    """Adaptive Simpson integral of f over [a, b] to absolute tolerance tol.

    Refinement order is deterministic (always split at the midpoint, left
    half first) and each accepted panel gets the usual Richardson
    correction.  Raises :class:`OracleConvergenceError` if the depth limit
    is reached with the local error estimate still above tolerance.
    """
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    if not tol > 0:
        raise ValueError("tol must be positive")
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return _simpson_recurse(f, a, b, fa, fm, fb, whole, tol, max_depth)


def _simpson_recurse(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    if abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    if depth <= 0:
        raise OracleConvergenceError(
            f"adaptive Simpson did not converge on [{a}, {b}] "
            f"(residual {abs(delta) / 15.0:.3e} > tol {tol:.3e})"
        )
    return _simpson_recurse(
        f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1
    ) + _simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)


def inner_product(
    ef1: Eigenfunction,
    ef2: Eigenfunction,
    tol: float = DEFAULTS.inner_product_tol,
) -> float:
    """<psi1|psi2> over the real line, truncated with a certified tail bound."""
    if ef1.units != ef2.units:
        raise ValueError("inner products require matching unit systems")
    coeffs = list(ef1.poly_x_coefficients()) + list(ef2.poly_x_coefficients())
    decay = ef1.gaussian_rate + ef2.gaussian_rate
    cutoff = _tail_cutoff(coeffs, decay, tol / 10.0)
    psi1 = wavefunction_evaluator(ef1)
    psi2 = wavefunction_evaluator(ef2)

    def integrand(x: float) -> float:
        return psi1(x) * psi2(x)

    return quadrature(integrand, -cutoff, cutoff, 0.9 * tol)


def numeric_laplace(
    phi: XiPolynomial, s: float, tol: float = DEFAULTS.laplace_tol
) -> float:
    """Direct numeric transform: integral_0^T exp(-s xi) phi(xi) d xi.

    phi grows polynomially, so it is of exponential order and the transform
    exists for all s > 0.  The cutoff T is certified term by term with the
    log-derivative majorant of xi**e exp(-s xi); the truncated tail stays
    below tol/10.
    """
    if not s > 0:
        raise ValueError(f"transform requires s > 0, got {s}")
    if not tol > 0:
        raise ValueError("tol must be positive")
    exponents = [(q / 2.0, abs(c.to_float())) for q, c in phi.terms]
    top = max(e for e, _ in exponents)
    cutoff = 2.0 * (top + 1.0) / s + 1.0
    while True:
        slope = s - top / cutoff if cutoff > 0 else -1.0
        if slope > 0:
            tail = sum(
                weight * cutoff**e * math.exp(-s * cutoff) / slope
                for e, weight in exponents
            )
            if tail < tol / 10.0:
                break
        cutoff *= 1.5
        if cutoff > 1e9:
            raise OracleConvergenceError("could not certify a transform cutoff")

    float_terms = [(q / 2.0, c.to_float()) for q, c in phi.terms]

    def integrand(xi: float) -> float:
        poly = 0.0
        for e, weight in float_terms:
            poly += weight * xi**e
        return math.exp(-s * xi) * poly

    return quadrature(integrand, 0.0, cutoff, 0.9 * tol)


# ---------------------------------------------------------------------------
# asymptotic reports


@dataclass(frozen=True)
class AsymptoticSample:
    s: float
    value: float
    drift: float


@dataclass(frozen=True)
class AsymptoticReport:
    """Outcome of a limit check along a sequence of s values.

    ``samples`` carry the raw scaled values and their pointwise relative
    drift from the target constant.  ``limit_drift`` is the relative
    deviation of the s->limit extrapolation (linear in the running
    variable, from the last two samples) and is what ``passed`` gates on;
    the pointwise drift of a truncated series at finite s is bounded below
    by its first neglected term, so it is reported but not gated.
    """

    target: float
    samples: tuple[AsymptoticSample, ...]
    limit_estimate: float
    limit_drift: float
    rate_ratio: Optional[float]
    side_check_drift: float
    passed: bool


def _relative(value: float, target: float) -> float:
    scale = abs(target)
    if scale == 0.0:
        return abs(value)
    return abs(value - target) / scale


def asymptotic_small_s(
    ts: TransformSeries,
    s_list: Sequence[float] = (1e-4, 1e-5, 1e-6),
    drift_tol: float = DEFAULTS.drift_tol,
    xi_probe: float = DEFAULTS.xi_probe,
) -> AsymptoticReport:
    """Check s**nu Phi(s) -> c0 as s -> 0+ along a decreasing sequence.

    Also probes the matching statement on the function side: the inverted
    polynomial must satisfy phi(xi) Gamma(nu) / xi**(nu-1) -> c0 for large
    xi.  The limit itself is estimated by linear extrapolation in s from
    the two smallest samples; the measured first-order drift rate is
    compared against the exact subleading coefficient when available.
    """
    values = list(s_list)
    if not values or any(not v > 0 for v in values):
        raise ValueError("s_list must contain positive values")
    if any(b >= a for a, b in zip(values, values[1:])):
        raise ValueError("s_list must decrease toward 0")
    scale = ts.c0.to_float()
    target = scale
    nu = float(ts.qn.nu)
    float_coeffs = [float(c) for c in ts.coefficients]

    def scaled(s: float) -> float:
        # s**nu * Phi(s) evaluated as the plain polynomial sum c_j s**j.
        total = 0.0
        for j, c in enumerate(float_coeffs):
            total += c * s**j
        return scale * total

    samples = tuple(
        AsymptoticSample(s=s, value=value, drift=_relative(value, target))
        for s, value in ((s, scaled(s)) for s in values)
    )
    if len(samples) >= 2 and samples[-1].s != samples[-2].s:
        s1, v1 = samples[-2].s, samples[-2].value
        s2, v2 = samples[-1].s, samples[-1].value
        limit = (s1 * v2 - s2 * v1) / (s1 - s2)
    else:
        limit = samples[-1].value
    limit_drift = _relative(limit, target)

    rate_ratio = None
    if ts.qn.n >= 1:
        expected_slope = float(ts.coefficients[1]) * target
        measured_slope = (samples[-1].value - target) / samples[-1].s
        if expected_slope != 0.0:
            rate_ratio = measured_slope / expected_slope

    phi = invert_transform(ts)
    gamma_nu = math.gamma(nu)
    side = phi.evaluate(xi_probe) * gamma_nu / xi_probe ** (nu - 1.0)
    side_drift = _relative(side, target)

    passed = limit_drift < drift_tol and side_drift < drift_tol
    if rate_ratio is not None:
        passed = passed and abs(rate_ratio - 1.0) < 1e-3
    return AsymptoticReport(
        target=target,
        samples=samples,
        limit_estimate=limit,
        limit_drift=limit_drift,
        rate_ratio=rate_ratio,
        side_check_drift=side_drift,
        passed=passed,
    )


def asymptotic_large_s(
    ts: TransformSeries,
    s_list: Sequence[float] = (1e6, 1e7, 1e8),
    drift_tol: float = DEFAULTS.drift_tol,
) -> AsymptoticReport:
    """Check s**(nu - n) Phi(s) -> c0 c_n as s -> infinity.

    The surviving last term dominates; its power nu - n = delta/2 + 1
    encodes the boundary exponent, so the report also fits the local
    log-slope of Phi and compares it to -(delta/2 + 1).
    """
    values = list(s_list)
    if not values or any(not v > 0 for v in values):
        raise ValueError("s_list must contain positive values")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError("s_list must increase toward infinity")
    n = ts.qn.n
    nu = ts.qn.nu
    target = ts.c0.to_float() * float(ts.coefficients[-1])
    power = float(nu - n)

    def scaled(s: float) -> float:
        return s**power * eval_transform(ts, s)

    samples = tuple(
        AsymptoticSample(s=s, value=scaled(s), drift=_relative(scaled(s), target))
        for s in values
    )
    final_drift = samples[-1].drift

    # local log-slope of Phi between the two largest s, vs -(delta/2 + 1)
    s1, s2 = values[-2], values[-1]
    p1, p2 = eval_transform(ts, s1), eval_transform(ts, s2)
    slope = math.log(abs(p2) / abs(p1)) / math.log(s2 / s1)
    expected_slope = -(ts.qn.delta / 2.0 + 1.0)
    slope_ok = abs(slope - expected_slope) < 1e-5

    passed = final_drift < drift_tol and slope_ok
    return AsymptoticReport(
        target=target,
        samples=samples,
        limit_estimate=samples[-1].value,
        limit_drift=final_drift,
        rate_ratio=None,
        side_check_drift=abs(slope - expected_slope),
        passed=passed,
    )
