"""Transform-side series for the oscillator eigenproblem.

The Gaussian-factored eigenfunction reduces the problem to a confluent
hypergeometric equation in xi = m*omega*x**2/hbar whose Laplace transform
Phi(s) obeys the first-order equation

    s(s - 1) Phi'(s) + (3s/2 - (k + 3)/4) Phi(s) = phi(0) / 2,

with k = 2E/(hbar*omega).  A Frobenius expansion about s = 0 terminates only
when the leading exponent ``nu`` sits on a parity lattice; that termination is
the quantization condition and fixes the spectrum.  This module builds the
truncated series, its coefficients (closed form and recurrence, always
cross-checked), and the exact residual test of the transform equation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exact_scalar import ExactScalar, ONE, ZERO, gamma_ratio_half
from .units import DIMENSIONLESS, Units


class InternalConsistencyError(RuntimeError):
    """Raised when two independent coefficient derivations disagree."""


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"

    @property
    def delta(self) -> int:
        """Boundary exponent: psi ~ x**delta at the origin."""
        return 0 if self is Parity.EVEN else 1

    @classmethod
    def of_total_index(cls, total_index: int) -> "Parity":
        if total_index < 0:
            raise ValueError("total index must be non-negative")
        return cls.EVEN if total_index % 2 == 0 else cls.ODD


@dataclass(frozen=True)
class QuantumNumbers:
    """Quantized state labels for one parity sector.

    ``n`` counts states within the parity sector; ``total_index`` is the
    global ladder index N = 2n + delta.  ``nu`` is the leading exponent of
    the transform series, ``k = 4*nu - 3`` the dimensionless energy
    2E/(hbar*omega), and ``energy_quanta = k/2`` the exact energy in units
    of hbar*omega.
    """

    parity: Parity
    n: int
    nu: Fraction
    k: Fraction
    delta: int
    total_index: int
    energy_quanta: Fraction
    energy: float


@dataclass(frozen=True)
class ConfluentForm:
    """Parameters (a, b) of the reduced confluent hypergeometric equation."""

    a: Fraction
    b: Fraction

    @classmethod
    def from_k(cls, k: Fraction) -> "ConfluentForm":
        return cls(a=(1 - Fraction(k)) / 4, b=Fraction(1, 2))


@dataclass(frozen=True)
class TransformSeries:
    """Truncated series Phi(s) = c0 * sum_j c_j s**(j - nu).

    ``coefficients`` are stored relative to c_0 = 1; the physical scale c0
    is kept separate so shape identities stay scale-free.
    """

    qn: QuantumNumbers
    coefficients: tuple[Fraction, ...]
    c0: ExactScalar = ONE

    def __post_init__(self):
        if self.c0.is_zero:
            raise ValueError("overall scale c0 must be non-zero")
        if len(self.coefficients) != self.qn.n + 1:
            raise ValueError(
                f"series for n={self.qn.n} needs {self.qn.n + 1} coefficients, "
                f"got {len(self.coefficients)}"
            )
        if self.coefficients[0] != 1:
            raise ValueError("coefficients are stored relative to c_0 = 1")


def quantize(
    parity: Parity, n: int, units: Units = DIMENSIONLESS
) -> QuantumNumbers:
    """Quantum numbers and energy of the n-th state of the given parity.

    The termination condition pins nu to n + 1 (even) or n + 3/2 (odd);
    with nu = (k + 3)/4 this gives k = 2N + 1 and E = (N + 1/2) hbar omega.
    """
    if n < 0:
        raise ValueError("state index n must be non-negative")
    if parity is Parity.EVEN:
        nu = Fraction(n + 1)
    else:
        nu = Fraction(2 * n + 3, 2)
    k = 4 * nu - 3
    delta = parity.delta
    total_index = 2 * n + delta
    energy_quanta = k / 2
    energy = float(energy_quanta) * units.hbar * units.omega
    return QuantumNumbers(
        parity=parity,
        n=n,
        nu=nu,
        k=k,
        delta=delta,
        total_index=total_index,
        energy_quanta=energy_quanta,
        energy=energy,
    )


def recurrence_step(parity: Parity, n: int, j: int, c_j: Fraction) -> Fraction:
    """One step c_j -> c_{j+1} of the termination-compatible recurrence.

    Odd parity: c_{j+1} = -c_j (n - j) / (j + 1).
    Even parity: c_{j+1} = -c_j (n - j - 1/2) / (j + 1).

    The step j = n into c_{n+1} is governed by the source term of the
    transform equation, not by this recurrence, so it is rejected.
    """
    if n < 0 or j < 0:
        raise ValueError("n and j must be non-negative")
    if j >= n:
        raise ValueError(
            f"recurrence_step is defined for 0 <= j < n, got j={j}, n={n}"
        )
    if parity is Parity.ODD:
        factor = Fraction(n - j)
    else:
        factor = Fraction(2 * (n - j) - 1, 2)
    return -Fraction(c_j) * factor / (j + 1)


def coefficients_closed_form(parity: Parity, n: int) -> tuple[Fraction, ...]:
    """All series coefficients c_0..c_n (relative to c_0 = 1) in closed form.

    Even: c_j = (-1)^j / j! * Gamma(n + 1/2)/Gamma(n - j + 1/2).
    Odd:  c_j = (-1)^j / j! * n!/(n - j)!  (signed binomial coefficients).
    """
    if n < 0:
        raise ValueError("state index n must be non-negative")
    coeffs = []
    for j in range(n + 1):
        sign = -1 if j % 2 else 1
        if parity is Parity.ODD:
            coeffs.append(Fraction(sign * math.comb(n, j)))
        else:
            coeffs.append(sign * gamma_ratio_half(n, j) / math.factorial(j))
    return tuple(coeffs)


def build_transform(
    parity: Parity,
    n: int,
    c0: ExactScalar = ONE,
    units: Units = DIMENSIONLESS,
) -> TransformSeries:
    """Construct Phi_n(s), deriving the coefficients twice.

    The closed form and the iterated recurrence are computed independently
    and compared term by term; a mismatch means the build itself is broken
    and raises :class:`InternalConsistencyError`.
    """
    closed = coefficients_closed_form(parity, n)
    recurred = [Fraction(1)]
    for j in range(n):
        recurred.append(recurrence_step(parity, n, j, recurred[j]))
    for j, (a, b) in enumerate(zip(closed, recurred)):
        if a != b:
            raise InternalConsistencyError(
                f"closed form and recurrence disagree at j={j}: {a} vs {b}"
            )
    return TransformSeries(qn=quantize(parity, n, units), coefficients=closed, c0=c0)


def eval_transform(ts: TransformSeries, s: float) -> float:
    """Floating evaluation of Phi(s) = c0 * sum_j c_j s**(j - nu) for s > 0."""
    if not s > 0:
        raise ValueError(f"transform is evaluated for s > 0, got {s}")
    nu = ts.qn.nu
    total = 0.0
    for j, c_j in enumerate(ts.coefficients):
        total += float(c_j) * s ** float(j - nu)
    return ts.c0.to_float() * total


@dataclass(frozen=True)
class OdeIdentityResult:
    """Outcome of the exact transform-equation check.

    ``constant_term`` is the coefficient the expansion leaves at s**0 and
    must equal ``expected_constant`` = phi(0)/2; every other power must
    cancel.  On failure ``offending_power`` and ``residual`` identify the
    first surviving term (ascending power order).
    """

    ok: bool
    constant_term: ExactScalar
    expected_constant: ExactScalar
    offending_power: Optional[Fraction] = None
    residual: Optional[ExactScalar] = None

    def __bool__(self) -> bool:
        return self.ok


def verify_ode_identity(ts: TransformSeries) -> OdeIdentityResult:
    """Exactly expand s(s-1)Phi' + (3s/2 - (k+3)/4)Phi and compare to phi(0)/2.

    The expansion is a generalized power series in s; the leading power
    cancels by quantization, interior powers by the recurrence, and the
    surviving constant must equal phi(0)/2 (c0*c_n/2 for even parity, 0 for
    odd, where phi(0) is the constant term of the inverted series).
    """
    nu = ts.qn.nu
    acc: dict[Fraction, ExactScalar] = {}

    def accumulate(power: Fraction, value: ExactScalar) -> None:
        if value.is_zero:
            return
        total = acc.get(power, ZERO) + value
        if total.is_zero:
            acc.pop(power, None)
        else:
            acc[power] = total

    for j, c_j in enumerate(ts.coefficients):
        scaled = ts.c0 * c_j
        # s(s-1)Phi' + (3s/2 - nu)Phi, using (k+3)/4 = nu:
        #   at s**(j-nu):    -j * c_j
        #   at s**(j-nu+1):  (j - nu + 3/2) * c_j
        accumulate(Fraction(j) - nu, scaled * Fraction(-j))
        accumulate(Fraction(j) - nu + 1, scaled * (Fraction(j) - nu + Fraction(3, 2)))

    if ts.qn.parity is Parity.EVEN:
        expected = (ts.c0 * ts.coefficients[-1]) * Fraction(1, 2)
    else:
        expected = ZERO

    constant = acc.pop(Fraction(0), ZERO)
    mismatch = constant - expected
    if not mismatch.is_zero:
        return OdeIdentityResult(
            ok=False,
            constant_term=constant,
            expected_constant=expected,
            offending_power=Fraction(0),
            residual=mismatch,
        )
    if acc:
        power = min(acc)
        return OdeIdentityResult(
            ok=False,
            constant_term=constant,
            expected_constant=expected,
            offending_power=power,
            residual=acc[power],
        )
    return OdeIdentityResult(ok=True, constant_term=constant, expected_constant=expected)


def spectral_condition(nu: Fraction, parity: Parity) -> bool:
    """True iff the series with leading exponent nu can terminate.

    Termination requires nu - 1 (even) or nu - 3/2 (odd) to be a
    non-negative integer; any nu > 0 may be probed, quantized or not.
    """
    nu = Fraction(nu)
    if not nu > 0:
        raise ValueError(f"leading exponent must be positive, got {nu}")
    offset = Fraction(1) if parity is Parity.EVEN else Fraction(3, 2)
    residue = nu - offset
    return residue.denominator == 1 and residue >= 0
