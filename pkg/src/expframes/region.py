"""Exact calculus on finite unions of half-open boxes with rational corners.

Every :class:`BoxRegion` is stored in canonical form, so two regions describe
the same point set exactly when they compare equal. The canonical form is
built in two passes:

1. an axis sweep (axis 0 outermost) splits space into slabs at every box
   endpoint, recursively canonicalizes each slab's cross-section and fuses
   neighbouring slabs whose cross-sections coincide;
2. a greedy pass fuses any two boxes whose union is again a box, axis by
   axis, until nothing changes.

Both passes depend only on the point set, never on the input order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import groupby
from typing import Iterable, Sequence

from .errors import DimensionMismatchError, EmptyRegionError
from .rationals import RationalVector, as_vector, format_rational

_Raw = tuple  # (lo tuple, hi tuple)


@dataclass(frozen=True, order=True)
class Box:
    """The half-open box ``prod_i [lo_i, hi_i)``."""

    lo: RationalVector
    hi: RationalVector

    def __post_init__(self):
        lo, hi = as_vector(self.lo), as_vector(self.hi)
        if len(lo) != len(hi) or not lo:
            raise DimensionMismatchError("box corners must share a positive dimension")
        if any(a >= b for a, b in zip(lo, hi)):
            raise ValueError(f"empty box {lo} -> {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def volume(self) -> Fraction:
        v = Fraction(1)
        for a, b in zip(self.lo, self.hi):
            v *= b - a
        return v

    def contains(self, x: RationalVector) -> bool:
        return all(a <= t < b for a, t, b in zip(self.lo, x, self.hi))

    def __str__(self):
        return " x ".join(
            f"[{format_rational(a)},{format_rational(b)})" for a, b in zip(self.lo, self.hi)
        )


@dataclass(frozen=True)
class BoxRegion:
    """A canonical finite disjoint union of half-open boxes.

    Build instances through :func:`canonicalize` (or :meth:`from_boxes`); the
    constructor trusts its input.
    """

    dim: int
    boxes: tuple = ()

    @classmethod
    def empty(cls, dim: int) -> "BoxRegion":
        return cls(dim, ())

    @classmethod
    def from_boxes(cls, boxes: Iterable, dim: int | None = None) -> "BoxRegion":
        return canonicalize(boxes, dim)

    @property
    def is_empty(self) -> bool:
        return not self.boxes

    def __bool__(self):
        return bool(self.boxes)

    def __iter__(self):
        return iter(self.boxes)

    def __len__(self):
        return len(self.boxes)

    def __str__(self):
        if not self.boxes:
            return "{}"
        return "{" + ", ".join(str(b) for b in self.boxes) + "}"

    # convenience operators, all exact
    def __and__(self, other):
        return intersect(self, other)

    def __or__(self, other):
        return union(self, other)

    def __sub__(self, other):
        return subtract(self, other)

    @property
    def measure(self) -> Fraction:
        return measure(self)


def _coerce_box(b) -> Box:
    if isinstance(b, Box):
        return b
    lo, hi = b
    return Box(as_vector(lo), as_vector(hi))


def _slabs(raw: list) -> list:
    """Axis sweep: canonical slab decomposition of a list of raw boxes."""
    if not raw:
        return []
    n = len(raw[0][0])
    cuts = sorted({b[0][0] for b in raw} | {b[1][0] for b in raw})
    where = {c: i for i, c in enumerate(cuts)}
    covering = [[] for _ in cuts]
    for bx in raw:
        for i in range(where[bx[0][0]], where[bx[1][0]]):
            covering[i].append(bx)
    slabs = []  # [a, b, cross]
    for a, b, active in zip(cuts, cuts[1:], covering):
        if not active:
            continue
        cross = () if n == 1 else tuple(_slabs([(lo[1:], hi[1:]) for lo, hi in active]))
        if slabs and slabs[-1][1] == a and slabs[-1][2] == cross:
            slabs[-1][1] = b
        else:
            slabs.append([a, b, cross])
    out = []
    for a, b, cross in slabs:
        if n == 1:
            out.append(((a,), (b,)))
        else:
            out.extend(((a,) + lo, (b,) + hi) for lo, hi in cross)
    return out


def _fuse(raw: list) -> list:
    """Greedily fuse pairs of boxes whose union is a box, to a fixpoint."""
    if not raw:
        return raw
    n = len(raw[0][0])
    boxes = sorted(raw)
    changed = True
    while changed:
        changed = False
        for axis in range(n):
            def footprint(bx, axis=axis):
                lo, hi = bx
                return (lo[:axis] + lo[axis + 1:], hi[:axis] + hi[axis + 1:])

            fused = []
            for _, group in groupby(sorted(boxes, key=lambda bx: (footprint(bx), bx)), key=footprint):
                group = list(group)
                cur_lo, cur_hi = group[0]
                for lo, hi in group[1:]:
                    if lo[axis] == cur_hi[axis]:
                        cur_hi = cur_hi[:axis] + (hi[axis],) + cur_hi[axis + 1:]
                        changed = True
                    else:
                        fused.append((cur_lo, cur_hi))
                        cur_lo, cur_hi = lo, hi
                fused.append((cur_lo, cur_hi))
            boxes = sorted(fused)
    return boxes


def canonicalize(boxes: Iterable, dim: int | None = None) -> BoxRegion:
    """Return the canonical region covering the union of ``boxes``.

    Overlapping input is allowed. ``dim`` is needed only for empty input.
    """
    items = [_coerce_box(b) for b in boxes]
    if not items:
        if dim is None:
            raise ValueError("dimension required for an empty region")
        return BoxRegion.empty(dim)
    d = items[0].dim
    if dim is not None and dim != d or any(b.dim != d for b in items):
        raise DimensionMismatchError("boxes of differing dimension")
    raw = _fuse(_slabs([(b.lo, b.hi) for b in items]))
    return BoxRegion(d, tuple(Box(lo, hi) for lo, hi in raw))


def _check_dims(*parts):
    dims = {p.dim if isinstance(p, BoxRegion) else len(p) for p in parts}
    if len(dims) != 1:
        raise DimensionMismatchError(f"dimensions disagree: {sorted(dims)}")


def measure(r: BoxRegion) -> Fraction:
    return sum((b.volume for b in r.boxes), Fraction(0))


def translate(r: BoxRegion, v: Sequence) -> BoxRegion:
    v = as_vector(v)
    _check_dims(r, v)
    # translation preserves canonical form
    moved = tuple(
        Box(tuple(a + t for a, t in zip(b.lo, v)), tuple(a + t for a, t in zip(b.hi, v)))
        for b in r.boxes
    )
    return BoxRegion(r.dim, moved)


def _box_meet(a: Box, b: Box):
    lo = tuple(max(x, y) for x, y in zip(a.lo, b.lo))
    hi = tuple(min(x, y) for x, y in zip(a.hi, b.hi))
    if any(x >= y for x, y in zip(lo, hi)):
        return None
    return (lo, hi)


def intersect(r1: BoxRegion, r2: BoxRegion) -> BoxRegion:
    _check_dims(r1, r2)
    pieces = []
    for a in r1.boxes:
        for b in r2.boxes:
            m = _box_meet(a, b)
            if m is not None:
                pieces.append(m)
    return canonicalize(pieces, r1.dim)


def _box_minus(a: _Raw, b: Box) -> list:
    lo, hi = list(a[0]), list(a[1])
    if any(max(x, y) >= min(u, v) for x, y, u, v in zip(lo, b.lo, hi, b.hi)):
        return [a]
    out = []
    for i in range(len(lo)):
        if lo[i] < b.lo[i]:
            out.append((tuple(lo), tuple(hi[:i] + [b.lo[i]] + hi[i + 1:])))
            lo[i] = b.lo[i]
        if b.hi[i] < hi[i]:
            out.append((tuple(lo[:i] + [b.hi[i]] + lo[i + 1:]), tuple(hi)))
            hi[i] = b.hi[i]
    return out


def subtract(r1: BoxRegion, r2: BoxRegion) -> BoxRegion:
    """Set difference ``r1 \\ r2``."""
    _check_dims(r1, r2)
    pieces = [(b.lo, b.hi) for b in r1.boxes]
    for b in r2.boxes:
        pieces = [p for piece in pieces for p in _box_minus(piece, b)]
        if not pieces:
            break
    return canonicalize(pieces, r1.dim)


def union(r1: BoxRegion, r2: BoxRegion) -> BoxRegion:
    _check_dims(r1, r2)
    return canonicalize(list(r1.boxes) + list(r2.boxes), r1.dim)


def contains_point(r: BoxRegion, x: Sequence) -> bool:
    x = as_vector(x)
    _check_dims(r, x)
    return any(b.contains(x) for b in r.boxes)


def is_subset(r1: BoxRegion, r2: BoxRegion) -> bool:
    return subtract(r1, r2).is_empty


def bounding_box(r: BoxRegion) -> Box:
    if r.is_empty:
        raise EmptyRegionError("bounding box of an empty region")
    lo = tuple(min(b.lo[i] for b in r.boxes) for i in range(r.dim))
    hi = tuple(max(b.hi[i] for b in r.boxes) for i in range(r.dim))
    return Box(lo, hi)


def box_region(lo, hi) -> BoxRegion:
    """Region consisting of the single box ``[lo, hi)``."""
    b = Box(as_vector(lo), as_vector(hi))
    return BoxRegion(b.dim, (b,))
