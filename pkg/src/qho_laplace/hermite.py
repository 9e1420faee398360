"""Hermite polynomials with exact integer coefficients.

Two independent constructions are provided on purpose: the explicit
alternating sum and the three-term recurrence.  They must agree exactly,
which catches off-by-one errors in the floor(N/2) summation.  The match
operation identifies an inverted series polynomial with lambda * H_N(sqrt(xi))
by exact coefficient comparison, never by sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

from .exact_scalar import ExactScalar
from .inversion import XiPolynomial
from .laplace_series import QuantumNumbers


class HermiteMatchError(ValueError):
    """The polynomial is not proportional to the expected Hermite polynomial."""

    def __init__(self, message: str, half_power: Optional[int] = None):
        super().__init__(message)
        self.half_power = half_power


@dataclass(frozen=True)
class HermitePolynomial:
    """Physicists' Hermite polynomial with ascending integer coefficients.

    Invariants: len(coeffs) == degree + 1, leading coefficient 2**degree,
    and coefficients of powers with the wrong parity are zero.
    """

    degree: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be non-negative")
        if len(self.coeffs) != self.degree + 1:
            raise ValueError("coefficient list must have degree + 1 entries")

    def evaluate(self, y: float) -> float:
        total = 0.0
        for c in reversed(self.coeffs):
            total = total * y + c
        return total


def hermite_explicit(degree: int) -> HermitePolynomial:
    """H_N from the explicit sum
    N! * sum_{j=0}^{[N/2]} (-1)^j (2y)^(N-2j) / (j! (N-2j)!).
    """
    if degree < 0:
        raise ValueError("degree must be non-negative")
    coeffs = [0] * (degree + 1)
    n_fact = math.factorial(degree)
    for j in range(degree // 2 + 1):
        power = degree - 2 * j
        term = n_fact * 2**power // (math.factorial(j) * math.factorial(power))
        coeffs[power] = -term if j % 2 else term
    return HermitePolynomial(degree=degree, coeffs=tuple(coeffs))


def hermite_recurrence(degree: int) -> HermitePolynomial:
    """H_N from H_0 = 1, H_1 = 2y, H_{m+1} = 2y H_m - 2m H_{m-1}."""
    if degree < 0:
        raise ValueError("degree must be non-negative")
    previous = [1]
    if degree == 0:
        return HermitePolynomial(degree=0, coeffs=(1,))
    current = [0, 2]
    for m in range(1, degree):
        nxt = [0] + [2 * c for c in current]
        for power, c in enumerate(previous):
            nxt[power] -= 2 * m * c
        previous, current = current, nxt
    return HermitePolynomial(degree=degree, coeffs=tuple(current))


def parity_identity_check(degree: int, samples: Iterable[float] = ()) -> bool:
    """Verify H_N(-y) = (-1)^N H_N(y), structurally and at sample points."""
    poly = hermite_explicit(degree)
    for power, c in enumerate(poly.coeffs):
        if power % 2 != degree % 2 and c != 0:
            return False
    for y in samples:
        left = poly.evaluate(-y)
        right = (-1) ** degree * poly.evaluate(y)
        if not math.isclose(left, right, rel_tol=1e-12, abs_tol=1e-12):
            return False
    return True


def match_to_hermite(
    phi: XiPolynomial, qn: QuantumNumbers
) -> tuple[ExactScalar, int]:
    """Exact constant lambda with phi(xi) = lambda * H_N(sqrt(xi)), N = 2n+delta.

    Every coefficient of phi must be lambda times the corresponding Hermite
    coefficient; the first half power that breaks proportionality raises
    :class:`HermiteMatchError`.
    """
    degree = qn.total_index
    hermite = hermite_explicit(degree)
    remaining = dict(phi.terms)
    constant: Optional[ExactScalar] = None
    for power in range(degree % 2, degree + 1, 2):
        h_coeff = hermite.coeffs[power]
        phi_coeff = remaining.pop(power, None)
        if phi_coeff is None:
            raise HermiteMatchError(
                f"missing xi**({power}/2) term expected from H_{degree}",
                half_power=power,
            )
        candidate = phi_coeff / h_coeff
        if constant is None:
            constant = candidate
        elif candidate != constant:
            raise HermiteMatchError(
                f"coefficient ratio at xi**({power}/2) is {candidate}, "
                f"expected {constant}",
                half_power=power,
            )
    if remaining:
        stray = min(remaining)
        raise HermiteMatchError(
            f"unexpected xi**({stray}/2) term outside H_{degree}",
            half_power=stray,
        )
    assert constant is not None
    return constant, degree
