"""Physical unit constants for the oscillator (hbar, mass, omega)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class Units:
    """Strictly positive hbar, mass and angular frequency.

    Values are floats, but every float is a dyadic rational, so the exact
    accessors below lose nothing: identity checks done with them hold
    exactly in any unit system.
    """

    hbar: float = 1.0
    mass: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "mass", "omega"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be strictly positive, got {value}")

    def scale_ratio_exact(self) -> Fraction:
        """m*omega/hbar as an exact rational (the x -> y scaling is its root)."""
        return Fraction(self.mass) * Fraction(self.omega) / Fraction(self.hbar)

    def gaussian_rate_exact(self) -> Fraction:
        """m*omega/(2*hbar) as an exact rational."""
        return self.scale_ratio_exact() / 2

    def quantum_exact(self) -> Fraction:
        """hbar*omega as an exact rational."""
        return Fraction(self.hbar) * Fraction(self.omega)


DIMENSIONLESS = Units()
