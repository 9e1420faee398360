"""Term-by-term inversion of the transform series and eigenfunction assembly.

Each transform term c_j s**(-(nu - j)) inverts to
c_j xi**(nu - j - 1) / Gamma(nu - j), giving a generalized polynomial
phi(xi) with integer or half-integer powers.  Substituting
xi = (m omega / hbar) x**2 (and xi**(1/2) -> sqrt(m omega/hbar) x, signed,
so odd states extend oddly to x < 0) and attaching the Gaussian factor
produces the eigenfunction psi_n(x).  The Schroedinger residual check is
done symbolically and exactly: polynomial-times-Gaussian is closed under
differentiation, and every float unit constant is a dyadic rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Optional

from .exact_scalar import ExactScalar, ZERO, gamma_of_half_integer
from .laplace_series import Parity, QuantumNumbers, TransformSeries
from .units import Units

Integrator = Callable[[Callable[[float], float], float, float, float], float]


class ParityMismatchError(ValueError):
    """Polynomial parity does not match the requested quantum numbers."""


class InversionDomainError(ValueError):
    """A transform term falls outside the invertible domain (guards corruption)."""


@dataclass(frozen=True)
class XiPolynomial:
    """Generalized polynomial sum_q coeff_q * xi**(q/2).

    Terms are (half_power, coefficient) with strictly increasing
    non-negative half powers, no stored zeros, and a single power parity
    (all even q for even states, all odd for odd states).
    """

    terms: tuple[tuple[int, ExactScalar], ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("polynomial needs at least one term")
        previous = -1
        parity_class = self.terms[0][0] % 2
        for q, coeff in self.terms:
            if q < 0:
                raise ValueError("half powers must be non-negative")
            if q <= previous:
                raise ValueError("half powers must be strictly increasing")
            if q % 2 != parity_class:
                raise ValueError("all half powers must share parity")
            if coeff.is_zero:
                raise ValueError("zero coefficients must not be stored")
            previous = q

    @property
    def parity(self) -> Parity:
        return Parity.EVEN if self.terms[0][0] % 2 == 0 else Parity.ODD

    @property
    def max_half_power(self) -> int:
        return self.terms[-1][0]

    def constant_term(self) -> ExactScalar:
        if self.terms[0][0] == 0:
            return self.terms[0][1]
        return ZERO

    def coefficient(self, half_power: int) -> ExactScalar:
        for q, coeff in self.terms:
            if q == half_power:
                return coeff
        return ZERO

    def evaluate(self, xi: float) -> float:
        if xi < 0:
            raise ValueError("xi is a squared coordinate and must be >= 0")
        return sum(c.to_float() * xi ** (q / 2.0) for q, c in self.terms)


@dataclass(frozen=True)
class Eigenfunction:
    """psi(x) = normalization * P(x) * exp(-gaussian_rate * x**2).

    The polynomial part is stored exactly in the scaled coordinate
    y = sqrt(m omega / hbar) x: ``scaled_coeffs`` maps y-powers to exact
    coefficients, and the x-space coefficient of x**q is
    coeff * scale_ratio**(q/2).  ``scale_ratio`` (= m omega / hbar) and the
    Gaussian rate are kept as exact rationals alongside their float views.
    """

    qn: QuantumNumbers
    units: Units
    scaled_coeffs: tuple[tuple[int, ExactScalar], ...]
    scale_ratio: Fraction
    gaussian_rate_exact: Fraction
    gaussian_rate: float
    normalization: float = 1.0

    def poly_x_coefficients(self) -> tuple[tuple[int, float], ...]:
        """(power of x, float coefficient) pairs, normalization included."""
        ratio = float(self.scale_ratio)
        return tuple(
            (q, self.normalization * coeff.to_float() * ratio ** (q / 2.0))
            for q, coeff in self.scaled_coeffs
        )


def invert_transform(ts: TransformSeries) -> XiPolynomial:
    """Invert Phi(s) term by term into phi(xi), exactly.

    Uses the power rule: s**(-(nu - j)) is the transform of
    xi**(nu - j - 1) / Gamma(nu - j).  Valid series always have
    nu - j >= 1 (even) or 3/2 (odd); anything else is corruption.
    """
    nu = ts.qn.nu
    terms = []
    for j in range(ts.qn.n, -1, -1):
        exponent = nu - j          # transform power: s**(-exponent)
        if exponent <= 0:
            raise InversionDomainError(
                f"term with s-power {-exponent} is not invertible"
            )
        two_exponent = 2 * exponent
        if two_exponent.denominator != 1:
            raise InversionDomainError(
                f"exponent {exponent} is not an integer or half-integer"
            )
        gamma = gamma_of_half_integer(int(two_exponent))
        coeff = (ts.c0 * ts.coefficients[j]) / gamma
        if coeff.is_zero:
            continue
        half_power = int(2 * (exponent - 1))   # xi**((nu - j - 1)) = xi**(q/2)
        terms.append((half_power, coeff))
    return XiPolynomial(terms=tuple(terms))


def assemble_wavefunction(
    phi: XiPolynomial, qn: QuantumNumbers, units: Units
) -> Eigenfunction:
    """Substitute xi = (m omega/hbar) x**2 into phi and attach the Gaussian.

    xi**(q/2) becomes (scale_ratio)**(q/2) x**q with signed x, so odd-parity
    polynomials extend oddly to x < 0 without piecewise definitions.
    """
    if phi.parity is not qn.parity:
        raise ParityMismatchError(
            f"polynomial parity {phi.parity.value} != state parity {qn.parity.value}"
        )
    if phi.max_half_power != qn.total_index:
        raise ParityMismatchError(
            f"polynomial degree {phi.max_half_power} does not match state "
            f"index N={qn.total_index}"
        )
    ratio = units.scale_ratio_exact()
    rate = units.gaussian_rate_exact()
    return Eigenfunction(
        qn=qn,
        units=units,
        scaled_coeffs=phi.terms,
        scale_ratio=ratio,
        gaussian_rate_exact=rate,
        gaussian_rate=float(rate),
        normalization=1.0,
    )


def wavefunction_evaluator(ef: Eigenfunction) -> Callable[[float], float]:
    """Fast float evaluator of psi; coefficients are converted once."""
    coeffs = ef.poly_x_coefficients()
    rate = ef.gaussian_rate

    def psi(x: float) -> float:
        poly = 0.0
        for q, coeff in coeffs:
            poly += coeff * x**q
        return poly * math.exp(-rate * x * x)

    return psi


def eval_wavefunction(ef: Eigenfunction, x: float) -> float:
    """Floating evaluation of psi(x)."""
    return wavefunction_evaluator(ef)(x)


def boundary_exponent(ef: Eigenfunction) -> int:
    """Lowest power of x in the polynomial part; psi ~ x**delta at 0."""
    return ef.scaled_coeffs[0][0]


@dataclass(frozen=True)
class SchrodingerResidual:
    """Residual polynomial R with (H - E) psi = R(x) exp(-rate x**2).

    ``terms`` maps x-powers q to exact coefficients in units of
    scale_ratio**(q/2): the full x-space coefficient of x**q is
    coeff * scale_ratio**(q/2).  A correct eigenfunction leaves the zero
    polynomial regardless of the unit system.
    """

    terms: tuple[tuple[int, ExactScalar], ...]
    scale_ratio: Fraction

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def evaluate(self, x: float) -> float:
        ratio = float(self.scale_ratio)
        return sum(
            c.to_float() * ratio ** (q / 2.0) * x**q for q, c in self.terms
        )


def _poly_derivative(poly: dict[int, ExactScalar]) -> dict[int, ExactScalar]:
    out: dict[int, ExactScalar] = {}
    for q, c in poly.items():
        if q > 0:
            out[q - 1] = c * q
    return out


def _poly_shift(poly: dict[int, ExactScalar], shift: int) -> dict[int, ExactScalar]:
    return {q + shift: c for q, c in poly.items()}


def _poly_scale(poly: dict[int, ExactScalar], factor: Fraction) -> dict[int, ExactScalar]:
    if factor == 0:
        return {}
    return {q: c * factor for q, c in poly.items()}


def _poly_add(*polys: dict[int, ExactScalar]) -> dict[int, ExactScalar]:
    out: dict[int, ExactScalar] = {}
    for poly in polys:
        for q, c in poly.items():
            total = out.get(q, ZERO) + c
            if total.is_zero:
                out.pop(q, None)
            else:
                out[q] = total
    return out


def schrodinger_residual(ef: Eigenfunction) -> SchrodingerResidual:
    """Apply (H - E) to psi symbolically and return the residual polynomial.

    Everything is exact: unit floats convert losslessly to rationals, the
    state energy is carried as the exact rational k, and differentiation of
    polynomial-times-Gaussian stays in that ring.  Working in the scaled
    coordinate y = sqrt(m omega/hbar) x, with g = rate/(m omega/hbar) the
    actual Gaussian shape parameter of this eigenfunction,

        (H - E) psi = (hbar omega / 2) [ -Q'' + 4 g y Q'
                       - (4 g**2 - 1) y**2 Q + 2 g Q - k Q ] e^{-g y**2},

    which collapses to the zero polynomial exactly when Q has the Hermite
    form, g = 1/2 and k = 2N + 1.  A wrong Gaussian rate, energy or
    coefficient leaves a non-zero term.
    """
    ratio = ef.units.scale_ratio_exact()
    g = ef.gaussian_rate_exact / ratio
    k = ef.qn.k
    half_quantum = ef.units.quantum_exact() / 2

    poly = dict(ef.scaled_coeffs)
    d1 = _poly_derivative(poly)
    d2 = _poly_derivative(d1)

    bracket = _poly_add(
        _poly_scale(d2, Fraction(-1)),
        _poly_shift(_poly_scale(d1, 4 * g), 1),
        _poly_shift(_poly_scale(poly, -(4 * g * g - 1)), 2),
        _poly_scale(poly, 2 * g - k),
    )
    terms = tuple(
        (q, coeff * half_quantum) for q, coeff in sorted(bracket.items())
    )
    return SchrodingerResidual(terms=terms, scale_ratio=ratio)


def _tail_cutoff(abs_coeffs: list[tuple[int, float]], decay: float, tol: float) -> float:
    """Half-width L with a certified bound: the tail of the squared-envelope
    integral |P(x)|**2 exp(-decay x**2) beyond +-L stays below tol.

    Uses the log-derivative majorant: past the last stationary point the
    integrand m(x) = C**2 x**(2p) exp(-decay x**2) satisfies
    integral_L^inf m <= m(L) / (decay L - p/L) once the denominator is
    positive.
    """
    envelope = sum(abs(c) for _, c in abs_coeffs)
    degree = max(q for q, _ in abs_coeffs)
    L = max(1.0, math.sqrt((2 * degree + 2) / decay))
    while True:
        slope = decay * L - degree / L
        if slope > 0:
            peak = envelope * envelope * L ** (2 * degree) * math.exp(-decay * L * L)
            if 2.0 * peak / slope < tol:
                return L
        L *= 1.25
        if L > 1e6:
            raise ValueError("could not certify an integration cutoff")


def normalize(
    ef: Eigenfunction, integrate: Integrator, tol: float = 1e-12
) -> Eigenfunction:
    """Return a copy with normalization A set so that <psi|psi> = 1.

    The norm integral is evaluated by the supplied quadrature within tol;
    the integration window comes from a certified Gaussian tail bound.  The
    sign convention makes the coefficient of x**N positive.
    """
    base = replace(ef, normalization=1.0)
    coeffs = base.poly_x_coefficients()
    L = _tail_cutoff(list(coeffs), 2.0 * base.gaussian_rate, tol / 10.0)
    psi = wavefunction_evaluator(base)

    def integrand(x: float) -> float:
        value = psi(x)
        return value * value

    norm_sq = integrate(integrand, -L, L, tol)
    if not norm_sq > 0:
        raise ValueError("norm integral is not positive; cannot normalize")
    amplitude = 1.0 / math.sqrt(norm_sq)
    leading_sign = ef.scaled_coeffs[-1][1].sign()
    if leading_sign < 0:
        amplitude = -amplitude
    return replace(ef, normalization=amplitude)
