import random
from fractions import Fraction as F

import pytest
from hypothesis import strategies as st

from expframes.lattice import SeparableLattice
from expframes.region import Box, canonicalize

Z = SeparableLattice((1,))
Z2 = SeparableLattice((1, 1))


def interval(a, b):
    return canonicalize([((F(a),), (F(b),))])


def boxes(*pairs, dim=1):
    return canonicalize([(lo if isinstance(lo, tuple) else (lo,), hi if isinstance(hi, tuple) else (hi,))
                         for lo, hi in pairs], dim)


# coordinates on the grid (1/12) Z keep brute-force grid oracles exact and small
GRID = 12


@st.composite
def grid_boxes(draw, dim=None, max_boxes=5, lo=-2, hi=3):
    d = dim or draw(st.integers(1, 2))
    n = draw(st.integers(0, max_boxes))
    out = []
    for _ in range(n):
        a = [draw(st.integers(lo * GRID, hi * GRID - 1)) for _ in range(d)]
        w = [draw(st.integers(1, GRID * 2)) for _ in range(d)]
        out.append(Box(tuple(F(x, GRID) for x in a), tuple(F(x + y, GRID) for x, y in zip(a, w))))
    return d, out


def random_region(rng: random.Random, dim: int, max_boxes: int = 12, max_den: int = 12, span: int = 3):
    """Random bounded rational region: at most ``max_boxes`` boxes, denominators <= ``max_den``."""
    raw = []
    for _ in range(rng.randint(1, max_boxes)):
        lo, hi = [], []
        for _ in range(dim):
            q = rng.randint(1, max_den)
            a = F(rng.randint(-span * q, span * q), q)
            q2 = rng.randint(1, max_den)
            b = a + F(rng.randint(1, 2 * q2), q2)
            lo.append(a)
            hi.append(b)
        raw.append((tuple(lo), tuple(hi)))
    return canonicalize(raw, dim)


PERIOD_CHOICES = (F(1), F(1, 2), F(2), F(1, 3), F(3, 2))


def random_lattice(rng: random.Random, dim: int) -> SeparableLattice:
    return SeparableLattice(tuple(rng.choice(PERIOD_CHOICES) for _ in range(dim)))


@pytest.fixture
def rng():
    return random.Random(12345)
