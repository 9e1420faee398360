"""Exact arithmetic over rationals extended by half-integer powers of pi.

Every closed-form coefficient produced by the series pipeline is a rational
multiple of pi**(p/2) for some integer p, so a pair (Fraction, p) is a full
coefficient field for the algebra done here.  Values are immutable and all
operations are pure; the only exact-to-approximate boundary is
:meth:`ExactScalar.to_float`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


class IncommensurableScalarError(ValueError):
    """Raised when adding or comparing scalars with different pi powers."""


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected Fraction or int, got {type(value).__name__}")


@dataclass(frozen=True)
class ExactScalar:
    """A value ``rational * pi**(pi_half_exponent / 2)``.

    The zero scalar is canonical: its exponent is forced to 0, so dataclass
    equality and hashing agree with mathematical equality.
    """

    rational: Fraction
    pi_half_exponent: int = 0

    def __post_init__(self):
        object.__setattr__(self, "rational", _as_fraction(self.rational))
        if self.rational == 0 and self.pi_half_exponent != 0:
            object.__setattr__(self, "pi_half_exponent", 0)

    @property
    def is_zero(self) -> bool:
        return self.rational == 0

    def sign(self) -> int:
        """-1, 0, or 1; pi**(p/2) is positive so only the rational matters."""
        if self.rational > 0:
            return 1
        if self.rational < 0:
            return -1
        return 0

    def __add__(self, other: "ExactScalar") -> "ExactScalar":
        if not isinstance(other, ExactScalar):
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.pi_half_exponent != other.pi_half_exponent:
            raise IncommensurableScalarError(
                f"cannot add pi^({self.pi_half_exponent}/2) "
                f"to pi^({other.pi_half_exponent}/2)"
            )
        return ExactScalar(self.rational + other.rational, self.pi_half_exponent)

    def __sub__(self, other: "ExactScalar") -> "ExactScalar":
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "ExactScalar":
        return ExactScalar(-self.rational, self.pi_half_exponent)

    def __mul__(self, other) -> "ExactScalar":
        if isinstance(other, ExactScalar):
            return ExactScalar(
                self.rational * other.rational,
                self.pi_half_exponent + other.pi_half_exponent,
            )
        if isinstance(other, (int, Fraction)):
            return ExactScalar(self.rational * other, self.pi_half_exponent)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ExactScalar":
        if isinstance(other, ExactScalar):
            if other.is_zero:
                raise ZeroDivisionError("division by zero ExactScalar")
            return ExactScalar(
                self.rational / other.rational,
                self.pi_half_exponent - other.pi_half_exponent,
            )
        if isinstance(other, (int, Fraction)):
            return ExactScalar(self.rational / other, self.pi_half_exponent)
        return NotImplemented

    def compare(self, other: "ExactScalar") -> int:
        """Three-way ordering; defined when exponents match or a side is zero."""
        if not isinstance(other, ExactScalar):
            raise TypeError("compare expects an ExactScalar")
        if self.is_zero or other.is_zero:
            diff = self.sign() - other.sign()
            return (diff > 0) - (diff < 0)
        if self.pi_half_exponent != other.pi_half_exponent:
            raise IncommensurableScalarError(
                "ordering is undefined for different pi powers"
            )
        return (self.rational > other.rational) - (self.rational < other.rational)

    def to_float(self) -> float:
        """Convert to IEEE double.  The single exact->approximate boundary."""
        return float(self.rational) * math.pi ** (self.pi_half_exponent / 2.0)

    def __str__(self) -> str:
        if self.pi_half_exponent == 0:
            return str(self.rational)
        return f"{self.rational}*pi^({self.pi_half_exponent}/2)"


ZERO = ExactScalar(Fraction(0))
ONE = ExactScalar(Fraction(1))
SQRT_PI = ExactScalar(Fraction(1), 1)


def gamma_of_half_integer(two_z: int) -> ExactScalar:
    """Exact Gamma(two_z / 2) for a positive integer ``two_z``.

    Even ``two_z`` gives the factorial value (z - 1)!; odd ``two_z`` gives a
    rational multiple of sqrt(pi) via Gamma(m + 1/2) = (2m)!/(4^m m!) sqrt(pi).
    Arguments at or below zero sit outside the supported domain (Gamma has
    poles at the non-positive integers).
    """
    if not isinstance(two_z, int):
        raise TypeError("two_z must be an integer (twice the Gamma argument)")
    if two_z < 1:
        raise ValueError(f"two_z must be >= 1, got {two_z}")
    if two_z % 2 == 0:
        m = two_z // 2
        return ExactScalar(Fraction(math.factorial(m - 1)))
    m = (two_z - 1) // 2
    return ExactScalar(
        Fraction(math.factorial(2 * m), 4**m * math.factorial(m)), 1
    )


def gamma_ratio_half(n: int, j: int) -> Fraction:
    """Exact Gamma(n + 1/2) / Gamma(n - j + 1/2) for 0 <= j <= n.

    Computed as the falling product of half-integers
    prod_{i=0}^{j-1} (n - i - 1/2); the empty product (j = 0) is 1.
    """
    if n < 0 or j < 0:
        raise ValueError("n and j must be non-negative")
    if j > n:
        raise ValueError(f"need j <= n, got j={j} > n={n}")
    out = Fraction(1)
    for i in range(j):
        out *= Fraction(2 * (n - i) - 1, 2)
    return out
