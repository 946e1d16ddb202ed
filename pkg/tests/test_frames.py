import cmath
import math
import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from expframes.errors import DimensionMismatchError, NonHermitianError, NotExactMultitileError, SizeExceededError
from expframes.frames import (
    fiber_matrix,
    frame_check,
    hermitian_eigenvalues,
    jacobi_eigenvalues,
    report_for_decomposition,
    riesz_check,
    tightness_defect,
)
from expframes.lattice import SeparableLattice, annihilator, covolume
from expframes.tiling import decompose

from conftest import Z, interval, random_lattice, random_region

TWO_LEVEL = interval(0, F(3, 2))


def closed_form(shifts):
    """Extreme bounds for [0,1) u (1 + [0,1/2)) over Z: m -/+ |1 + sum_j e(a_j)|."""
    m = len(shifts)
    s = abs(sum(cmath.exp(2j * math.pi * float(a[0])) for a in shifts))
    return m - s, m + s


# -- fiber matrices ---------------------------------------------------------------

def test_fiber_matrix_examples():
    pts = lambda *ks: [Z.point((k,)) for k in ks]
    assert np.allclose(fiber_matrix(pts(0), [(0,)]), [[1]])
    assert np.allclose(fiber_matrix(pts(0, 1), [(0,), (F(1, 2),)]), [[1, 1], [1, -1]], atol=1e-15)
    assert np.allclose(fiber_matrix(pts(0, 1), [(0,), (0,)]), [[1, 1], [1, 1]])
    with pytest.raises(DimensionMismatchError):
        fiber_matrix(pts(0), [(0, 0)])


# -- eigenvalues ----------------------------------------------------------------

def test_hermitian_eigenvalue_examples():
    assert hermitian_eigenvalues([[3]]).eigenvalues == (3.0,)
    assert hermitian_eigenvalues([[2, 0], [0, 2]]).eigenvalues == (2.0, 2.0)
    e = np.array([[1, 1], [1, -1]])
    # characteristic polynomial of E E^* = 2 I is (x - 2)^2
    spec = hermitian_eigenvalues(e @ e.conj().T)
    assert np.allclose(spec.eigenvalues, [2, 2], rtol=1e-12)
    assert spec.rank == 2


def test_hermitian_eigenvalues_rejects_bad_input():
    with pytest.raises(NonHermitianError):
        hermitian_eigenvalues([[1, 2], [0, 1]])
    with pytest.raises(SizeExceededError):
        hermitian_eigenvalues(np.eye(65))


def test_rank_counts_threshold():
    spec = hermitian_eigenvalues([[1, 1], [1, 1]])
    assert spec.rank == 1
    assert abs(spec.lambda_min) < 1e-12 and abs(spec.lambda_max - 2) < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_jacobi_against_characteristic_roots(n, seed):
    gen = np.random.default_rng(seed)
    x = gen.normal(size=(n, n)) + 1j * gen.normal(size=(n, n))
    h = x @ x.conj().T
    ours = jacobi_eigenvalues(h)
    ref = np.linalg.eigvalsh(h)
    assert np.all(np.abs(ours - ref) <= 1e-10 * np.max(np.abs(ref)))


def test_jacobi_two_by_two_closed_form():
    # eigenvalues of [[a, b], [conj b, d]] are (a + d)/2 -/+ sqrt(((a - d)/2)^2 + |b|^2)
    a, d, b = 3.0, -1.0, 2 - 1j
    root = math.sqrt(((a - d) / 2) ** 2 + abs(b) ** 2)
    ours = jacobi_eigenvalues(np.array([[a, b], [b.conjugate(), d]]))
    assert np.allclose(ours, [(a + d) / 2 - root, (a + d) / 2 + root], rtol=1e-14)


# -- frame check ----------------------------------------------------------------

def test_frame_check_orthonormal_basis():
    rep = frame_check(interval(0, 1), Z, [(0,)])
    assert rep.is_frame and rep.A == rep.B == 1 and rep.tight


@pytest.mark.parametrize(
    "shift, a, b, tight",
    [(F(1, 2), 2, 2, True), (F(1, 3), 1, 3, False)],
)
def test_frame_check_two_level_example(shift, a, b, tight):
    rep = frame_check(TWO_LEVEL, Z, [(0,), (shift,)])
    assert rep.is_frame
    assert abs(rep.A - a) < 1e-12 and abs(rep.B - b) < 1e-12
    assert rep.tight is tight
    assert rep.subtiling_level == 2


def test_frame_check_repeated_shift_is_not_frame():
    rep = frame_check(TWO_LEVEL, Z, [(0,), (0,)])
    assert not rep.is_frame
    assert rep.A == 0
    ranks = {c.fiber: c.spectrum.rank for c in rep.per_cell}
    assert ranks[((0,), (1,))] == 1


def test_frame_bounds_scale_with_dual_covolume():
    # Lambda = 2Z, Gamma = Z/2: e^{2 pi i 2k x} on [0, 1/2) is orthogonal with norm^2 1/2
    rep = frame_check(interval(0, F(1, 2)), SeparableLattice((2,)), [(0,)])
    assert rep.is_frame and rep.A == rep.B == 0.5


def test_riesz_check_examples():
    rep = riesz_check(interval(0, 2), Z, [(0,), (F(1, 2),)])
    assert rep.riesz_basis and abs(rep.A - 2) < 1e-12 and abs(rep.B - 2) < 1e-12
    rep = riesz_check(interval(0, 1), Z, [(0,)])
    assert rep.riesz_basis and rep.A == rep.B == 1
    rep = riesz_check(interval(0, 2), Z, [(0,), (0,)])
    assert rep.riesz_basis is False and not rep.is_frame
    with pytest.raises(NotExactMultitileError):
        riesz_check(TWO_LEVEL, Z, [(0,), (F(1, 2),)])


def test_tightness_defect_examples():
    assert tightness_defect(TWO_LEVEL, Z, [(0,), (F(1, 2),)]) <= 1e-12
    assert abs(tightness_defect(TWO_LEVEL, Z, [(0,), (F(1, 3),)]) - 2) < 1e-12
    assert tightness_defect(TWO_LEVEL, Z, [(0,), (F(1, 3),), (F(2, 3),)]) <= 1e-12


@pytest.mark.parametrize("m", range(1, 7))
def test_closed_form_bounds(m):
    rng = random.Random(m)
    for _ in range(10):
        shifts = [(F(0),)] + [(F(rng.randrange(q), q),) for q in [rng.randint(2, 30) for _ in range(m - 1)]]
        rep = frame_check(TWO_LEVEL, Z, shifts)
        a, b = closed_form(shifts)
        assert abs(rep.A - a) < 1e-9 and abs(rep.B - b) < 1e-9


# -- randomized invariants ------------------------------------------------------

def _scene(seed):
    rng = random.Random(seed)
    dim = rng.randint(1, 2)
    omega = random_region(rng, dim, max_boxes=5, max_den=6, span=2)
    lam = random_lattice(rng, dim)
    m = rng.randint(1, 4)
    shifts = [tuple(F(rng.randrange(12), 12) * p for p in lam.periods) for _ in range(m)]
    return rng, omega, lam, shifts


def _grams(omega, lam, shifts):
    dec = decompose(omega, annihilator(lam))
    out = {}
    for cell in dec.cells:
        e = fiber_matrix(dec.fiber_points(cell), shifts)
        out[cell.fiber] = e @ e.conj().T
    return out


@pytest.mark.parametrize("seed", range(40))
def test_report_invariants(seed):
    _, omega, lam, shifts = _scene(seed)
    rep = frame_check(omega, lam, shifts)
    m = len(shifts)
    assert 0 <= rep.A <= rep.B + 1e-12
    assert (rep.A > 0) == rep.is_frame
    assert rep.B <= float(covolume(annihilator(lam))) * rep.subtiling_level * m * (1 + 1e-12)
    if rep.is_frame:
        assert rep.subtiling_level <= m
    for cell in rep.per_cell:
        eig = cell.spectrum.eigenvalues
        assert all(x >= -1e-9 for x in eig)
        assert abs(sum(eig) - cell.k * m) <= 1e-9 * cell.k * m
        assert cell.k <= rep.subtiling_level


@pytest.mark.parametrize("seed", range(30))
def test_shift_invariances(seed):
    rng, omega, lam, shifts = _scene(seed)
    base = _grams(omega, lam, shifts)
    # shifting each a_j by a point of Lambda
    moved = [tuple(a + p * rng.randint(-3, 3) for a, p in zip(s, lam.periods)) for s in shifts]
    # a common translate of all shifts
    t = tuple(F(rng.randint(-20, 20), 7) for _ in lam.periods)
    common = [tuple(a + x for a, x in zip(s, t)) for s in shifts]
    # a_j + lambda leaves every Gram entry unchanged
    other = _grams(omega, lam, moved)
    for fiber, g in base.items():
        assert np.max(np.abs(g - other[fiber])) <= 1e-12
    # a common translate conjugates each Gram by a diagonal unitary: same spectrum
    other = _grams(omega, lam, common)
    for fiber, g in base.items():
        assert np.allclose(np.linalg.eigvalsh(g), np.linalg.eigvalsh(other[fiber]), atol=1e-10)
    for variant in (moved, common):
        r1, r2 = frame_check(omega, lam, shifts), frame_check(omega, lam, variant)
        assert r1.is_frame == r2.is_frame
        assert abs(r1.A - r2.A) <= 1e-9 and abs(r1.B - r2.B) <= 1e-9


@pytest.mark.parametrize("seed", range(30))
def test_adding_a_shift_is_monotone(seed):
    rng, omega, lam, shifts = _scene(seed)
    extra = tuple(F(rng.randrange(12), 12) * p for p in lam.periods)
    r1 = frame_check(omega, lam, shifts)
    r2 = frame_check(omega, lam, shifts + [extra])
    assert r2.A >= r1.A - 1e-9
    assert r2.is_frame or not r1.is_frame


def test_report_reuses_decomposition():
    dec = decompose(TWO_LEVEL, Z)
    rep = report_for_decomposition(dec, [(0,), (F(1, 2),)])
    assert rep == frame_check(TWO_LEVEL, Z, [(0,), (F(1, 2),)])
