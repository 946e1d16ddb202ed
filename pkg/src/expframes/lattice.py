"""Separable lattices ``diag(p) Z^d`` in R^d and their characters."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionMismatchError
from .rationals import RationalVector, as_vector, format_rational
from .region import BoxRegion, box_region

# phases with these denominators have exactly representable characters
_EXACT_UNITS = {
    Fraction(0): 1 + 0j,
    Fraction(1, 4): 1j,
    Fraction(1, 2): -1 + 0j,
    Fraction(3, 4): -1j,
}


@dataclass(frozen=True)
class SeparableLattice:
    """The lattice ``diag(periods) Z^d`` with positive rational periods."""

    periods: RationalVector

    def __post_init__(self):
        periods = as_vector(self.periods)
        if not periods:
            raise ValueError("a lattice needs at least one period")
        if any(p <= 0 for p in periods):
            raise ValueError(f"periods must be positive, got {periods}")
        object.__setattr__(self, "periods", periods)

    @property
    def dim(self) -> int:
        return len(self.periods)

    def point(self, index: Sequence[int]) -> "LatticePoint":
        return LatticePoint(self, tuple(int(k) for k in index))

    def __str__(self):
        return "diag(" + ", ".join(format_rational(p) for p in self.periods) + ") Z^" + str(self.dim)


@dataclass(frozen=True)
class LatticePoint:
    lattice: SeparableLattice
    index: tuple

    def __post_init__(self):
        if len(self.index) != self.lattice.dim:
            raise DimensionMismatchError(
                f"index {self.index} does not match lattice dimension {self.lattice.dim}"
            )

    @property
    def value(self) -> RationalVector:
        return tuple(p * k for p, k in zip(self.lattice.periods, self.index))


def annihilator(lat: SeparableLattice) -> SeparableLattice:
    """Dual lattice ``{g : <l, g> in Z for all l in lat}``."""
    return SeparableLattice(tuple(1 / p for p in lat.periods))


def fundamental_domain(lat: SeparableLattice) -> BoxRegion:
    return box_region((0,) * lat.dim, lat.periods)


def covolume(lat: SeparableLattice) -> Fraction:
    return math.prod(lat.periods, start=Fraction(1))


def reduce_mod(x: Sequence, lat: SeparableLattice) -> tuple[RationalVector, LatticePoint]:
    """Split ``x = r + g`` with ``r`` in the canonical fundamental domain."""
    x = as_vector(x)
    if len(x) != lat.dim:
        raise DimensionMismatchError("point and lattice dimensions differ")
    index = tuple(math.floor(t / p) for t, p in zip(x, lat.periods))
    r = tuple(t - k * p for t, k, p in zip(x, index, lat.periods))
    return r, LatticePoint(lat, index)


def phase(a: Sequence, gamma: LatticePoint | Sequence) -> Fraction:
    """The exact pairing ``<a, gamma>`` reduced into ``[0, 1)``."""
    a = as_vector(a)
    g = gamma.value if isinstance(gamma, LatticePoint) else as_vector(gamma)
    if len(a) != len(g):
        raise DimensionMismatchError("shift and lattice point dimensions differ")
    return sum((s * t for s, t in zip(a, g)), Fraction(0)) % 1


def unit(theta: Fraction) -> complex:
    """``exp(2 pi i theta)`` for a rational ``theta`` already reduced mod 1."""
    exact = _EXACT_UNITS.get(theta)
    if exact is not None:
        return exact
    return cmath.exp(2j * math.pi * (theta.numerator / theta.denominator))


def character(a: Sequence, gamma: LatticePoint | Sequence) -> complex:
    """``exp(2 pi i <a, gamma>)``, with the phase reduced mod 1 exactly first."""
    return unit(phase(a, gamma))
