"""Multiplicity analysis of a region against a lattice and multitile completion.

For a bounded region ``omega`` and a lattice ``gamma`` the multiplicity
``F(w) = #{g in gamma : w + g in omega}`` is piecewise constant on the
fundamental domain ``Q``. :func:`decompose` computes the pieces exactly: each
:class:`Cell` is the set of ``w in Q`` whose fiber ``{g : w + g in omega}``
equals a given finite set of lattice points.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import DimensionMismatchError, EmptyRegionError, LevelExceededError
from .lattice import LatticePoint, SeparableLattice, covolume, fundamental_domain, reduce_mod
from .region import BoxRegion, canonicalize, translate

# a fiber is a sorted tuple of integer index tuples
FiberSet = tuple


@dataclass(frozen=True)
class Cell:
    region: BoxRegion
    fiber: FiberSet

    @property
    def k(self) -> int:
        return len(self.fiber)

    @property
    def measure(self) -> Fraction:
        return self.region.measure


@dataclass(frozen=True)
class CellDecomposition:
    omega: BoxRegion
    lattice: SeparableLattice
    domain: BoxRegion
    gamma_tilde: tuple
    cells: tuple
    zero_cell: BoxRegion
    level: int

    def fiber_points(self, cell: Cell) -> list[LatticePoint]:
        return [LatticePoint(self.lattice, idx) for idx in cell.fiber]


def _lattice_value(lat: SeparableLattice, index) -> tuple:
    return tuple(p * k for p, k in zip(lat.periods, index))


def _pieces(omega: BoxRegion, gamma: SeparableLattice) -> dict:
    """Map each relevant lattice index ``g`` to the boxes of ``(omega - g) & Q``.

    Boxes of a canonical region are disjoint, so the boxes listed for one
    index are disjoint as well. Every listed box has positive volume.
    """
    pieces = {}
    for b in omega.boxes:
        ranges = [
            range(math.floor(lo / p), math.ceil(hi / p))
            for lo, hi, p in zip(b.lo, b.hi, gamma.periods)
        ]
        for idx in itertools.product(*ranges):
            shift = _lattice_value(gamma, idx)
            lo = tuple(max(a - t, Fraction(0)) for a, t in zip(b.lo, shift))
            hi = tuple(min(a - t, p) for a, t, p in zip(b.hi, shift, gamma.periods))
            pieces.setdefault(idx, []).append((lo, hi))
    return dict(sorted(pieces.items()))


def gamma_tilde(omega_region: BoxRegion, gamma: SeparableLattice) -> list[LatticePoint]:
    """Lattice points ``g`` for which ``(omega - g)`` meets ``Q`` in positive measure."""
    if omega_region.is_empty:
        raise EmptyRegionError("gamma_tilde of an empty region")
    return [LatticePoint(gamma, idx) for idx in _pieces(omega_region, gamma)]


def decompose(omega: BoxRegion, gamma: SeparableLattice) -> CellDecomposition:
    """Partition the fundamental domain of ``gamma`` into constant-fiber cells.

    All breakpoints of the pieces ``(omega - g) & Q`` cut ``Q`` into a grid of
    atoms; each piece box marks the atoms it covers by index range, and atoms
    with equal fibers are merged into one canonical region per cell.
    """
    if omega.is_empty:
        raise EmptyRegionError("cannot decompose an empty region")
    if omega.dim != gamma.dim:
        raise DimensionMismatchError("region and lattice dimensions differ")
    d = gamma.dim
    q = fundamental_domain(gamma)
    pieces = _pieces(omega, gamma)
    coords = []
    for i, p in enumerate(gamma.periods):
        cs = {Fraction(0), p}
        for boxes in pieces.values():
            for lo, hi in boxes:
                cs.update((lo[i], hi[i]))
        coords.append(sorted(cs))
    where = [{c: k for k, c in enumerate(cs)} for cs in coords]
    fibers = {}
    # pieces iterate in sorted index order, so every fiber comes out sorted
    for idx, boxes in pieces.items():
        for lo, hi in boxes:
            spans = [range(where[i][lo[i]], where[i][hi[i]]) for i in range(d)]
            for atom in itertools.product(*spans):
                fibers.setdefault(atom, []).append(idx)
    groups = {}
    for atom in itertools.product(*[range(len(cs) - 1) for cs in coords]):
        box = (
            tuple(coords[i][a] for i, a in enumerate(atom)),
            tuple(coords[i][a + 1] for i, a in enumerate(atom)),
        )
        groups.setdefault(tuple(fibers.get(atom, ())), []).append(box)
    zero = canonicalize(groups.pop((), []), d)
    cells = [Cell(canonicalize(boxes, d), fiber) for fiber, boxes in groups.items()]
    cells.sort(key=lambda c: (c.region.boxes[0].lo, c.fiber))
    return CellDecomposition(
        omega=omega,
        lattice=gamma,
        domain=q,
        gamma_tilde=tuple(LatticePoint(gamma, idx) for idx in pieces),
        cells=tuple(cells),
        zero_cell=zero,
        level=max(c.k for c in cells),
    )


def subtiling_level(dec: CellDecomposition) -> int:
    return dec.level


def is_exact_multitile(dec: CellDecomposition, ell: int) -> bool:
    return dec.zero_cell.is_empty and all(c.k == ell for c in dec.cells)


def multiplicity_at(dec: CellDecomposition, x: Sequence) -> tuple[int, FiberSet]:
    r, _ = reduce_mod(x, dec.lattice)
    for cell in dec.cells:
        if any(b.contains(r) for b in cell.region.boxes):
            return cell.k, cell.fiber
    return 0, ()


def _shell(dim: int, radius: int) -> Iterator[tuple]:
    """Integer points of sup-norm exactly ``radius``, in lexicographic order."""
    for idx in itertools.product(range(-radius, radius + 1), repeat=dim):
        if max((abs(t) for t in idx), default=0) == radius:
            yield idx


def candidate_order(dec: CellDecomposition) -> Iterator[tuple]:
    """Completion candidates: the sorted relevant set first, then expanding shells of Z^d."""
    seen = set()
    for g in dec.gamma_tilde:
        seen.add(g.index)
        yield g.index
    for radius in itertools.count():
        for idx in _shell(dec.lattice.dim, radius):
            if idx not in seen:
                yield idx


def _first_missing(order_source, exclude, count) -> list:
    if count <= 0:
        return []
    picked = []
    for idx in order_source():
        if idx not in exclude:
            picked.append(idx)
            if len(picked) == count:
                break
    return picked


def complete_to_multitile(omega: BoxRegion, gamma: SeparableLattice, ell: int) -> BoxRegion:
    """Enlarge ``omega`` to a bounded exact ``ell``-tile of ``gamma``.

    Each cell with fiber ``B`` is copied onto the ``ell - #B`` earliest
    candidates outside ``B``; the empty cell is copied onto the ``ell``
    earliest candidates.

    Raises:
        LevelExceededError: if ``ell`` is below the subtiling level.
    """
    dec = decompose(omega, gamma)
    if ell < dec.level:
        raise LevelExceededError(f"ell={ell} is below the subtiling level {dec.level}")
    parts = []

    def source():
        return candidate_order(dec)

    def place(region, indices):
        for idx in indices:
            parts.extend(translate(region, _lattice_value(gamma, idx)).boxes)

    if dec.zero_cell:
        place(dec.zero_cell, _first_missing(source, set(), ell))
    for cell in dec.cells:
        place(cell.region, cell.fiber)
        place(cell.region, _first_missing(source, set(cell.fiber), ell - cell.k))
    delta = canonicalize(parts, gamma.dim)
    assert delta.measure == ell * covolume(gamma)
    return delta
