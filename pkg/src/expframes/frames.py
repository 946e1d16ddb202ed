"""Frame tests and optimal frame bounds for unions of shifted exponential lattices.

The system ``{exp(2 pi i <a_j + l, .>) : l in Lambda, j <= m}`` on ``L^2(omega)``
is analysed cell by cell over the dual lattice ``Gamma``. On a cell with fiber
``B = (g_1, ..., g_k)`` the relevant matrix is ``E[i, j] = exp(2 pi i <a_j, g_i>)``;
the system is a frame iff every ``E`` has full row rank, and the optimal bounds
are ``covolume(Gamma)`` times the extreme eigenvalues of ``E E^*`` over all
cells.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionMismatchError, NonHermitianError, NotExactMultitileError, SizeExceededError
from .lattice import LatticePoint, SeparableLattice, annihilator, covolume, phase, unit
from .rationals import RationalVector, as_vector
from .region import BoxRegion
from .tiling import CellDecomposition, FiberSet, decompose, is_exact_multitile

RANK_TOL = 1e-9
TIGHT_TOL = 1e-9
HERMITIAN_TOL = 1e-12
MAX_EIG_SIZE = 64
_JACOBI_TOL = 1e-14
_MAX_SWEEPS = 100


@dataclass(frozen=True)
class HermitianSpectrum:
    eigenvalues: tuple  # ascending
    rank: int

    @property
    def lambda_min(self) -> float:
        return self.eigenvalues[0]

    @property
    def lambda_max(self) -> float:
        return self.eigenvalues[-1]


def rank_threshold(lambda_max: float) -> float:
    return RANK_TOL * max(1.0, lambda_max)


def jacobi_eigenvalues(a: np.ndarray) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.

    Each rotation first removes the phase of the pivot ``a[p, q]`` with a
    diagonal unitary, then applies the real symmetric Jacobi rotation that
    annihilates it. Sweeps stop once the off-diagonal Frobenius mass falls
    below ``1e-14`` times the matrix norm.
    """
    a = np.array(a, dtype=complex)
    n = a.shape[0]
    if n == 1:
        return np.array([a[0, 0].real])
    scale = max(np.linalg.norm(a), 1e-300)
    for _ in range(_MAX_SWEEPS):
        off = math.sqrt(max(np.linalg.norm(a) ** 2 - np.sum(np.abs(np.diag(a)) ** 2), 0.0))
        if off <= _JACOBI_TOL * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = a[p, q]
                mag = abs(b)
                if mag <= 1e-300 or mag <= 1e-18 * scale:
                    continue
                ph = b / mag
                theta = 0.5 * math.atan2(2.0 * mag, a[q, q].real - a[p, p].real)
                c, s = math.cos(theta), math.sin(theta)
                # V = diag(1, conj(ph)) @ [[c, s], [-s, c]]
                v = np.array([[c, s], [-s * ph.conjugate(), c * ph.conjugate()]])
                cols = a[:, [p, q]] @ v
                a[:, p], a[:, q] = cols[:, 0], cols[:, 1]
                rows = v.conj().T @ a[[p, q], :]
                a[p, :], a[q, :] = rows[0], rows[1]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    return np.sort(np.diag(a).real)


def hermitian_eigenvalues(gram) -> HermitianSpectrum:
    """Spectrum of a small Hermitian matrix with its numerical rank.

    Raises:
        NonHermitianError: if ``gram`` deviates from Hermitian by more than 1e-12.
        SizeExceededError: for matrices larger than 64 x 64.
    """
    g = np.atleast_2d(np.asarray(gram, dtype=complex))
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise NonHermitianError(f"expected a square matrix, got shape {g.shape}")
    if g.shape[0] > MAX_EIG_SIZE:
        raise SizeExceededError(f"matrix of size {g.shape[0]} exceeds {MAX_EIG_SIZE}")
    if g.size and np.max(np.abs(g - g.conj().T)) > HERMITIAN_TOL * max(1.0, np.max(np.abs(g))):
        raise NonHermitianError("matrix is not Hermitian")
    eig = jacobi_eigenvalues(g)
    thresh = rank_threshold(float(eig[-1]))
    return HermitianSpectrum(tuple(float(x) for x in eig), int(np.sum(eig > thresh)))


def fiber_matrix(fiber: Sequence, shifts: Sequence) -> np.ndarray:
    """The ``k x m`` matrix of characters ``exp(2 pi i <a_j, g_i>)``.

    ``fiber`` holds lattice points (or their coordinate vectors), in fiber
    order; columns follow ``shifts``.
    """
    points = [g.value if isinstance(g, LatticePoint) else as_vector(g) for g in fiber]
    vecs = [as_vector(a) for a in shifts]
    if not points:
        raise ValueError("fiber must be nonempty")
    dim = len(points[0])
    if any(len(v) != dim for v in vecs) or any(len(g) != dim for g in points):
        raise DimensionMismatchError("shift and fiber dimensions differ")
    return np.array([[unit(phase(a, g)) for a in vecs] for g in points], dtype=complex)


@dataclass(frozen=True)
class CellSpectrum:
    fiber: FiberSet
    measure: object  # Fraction
    spectrum: HermitianSpectrum

    @property
    def k(self) -> int:
        return len(self.fiber)

    @property
    def full_rank(self) -> bool:
        return self.spectrum.rank == self.k


@dataclass(frozen=True)
class FrameReport:
    is_frame: bool
    lower_bound: float
    upper_bound: float
    tight: bool
    subtiling_level: int
    shifts_used: tuple
    per_cell: tuple = field(repr=False)
    covolume: object = None  # Fraction, |Q_Gamma|
    riesz_basis: bool | None = None

    @property
    def A(self) -> float:
        return self.lower_bound

    @property
    def B(self) -> float:
        return self.upper_bound

    @property
    def tightness_defect(self) -> float:
        return max(self.upper_bound - self.lower_bound, 0.0)

    @property
    def condition(self) -> float:
        return self.upper_bound / self.lower_bound if self.lower_bound > 0 else math.inf


def _check_shifts(shifts, dim) -> tuple:
    vecs = tuple(as_vector(a) for a in shifts)
    if not vecs:
        raise ValueError("at least one shift is required")
    if any(len(v) != dim for v in vecs):
        raise DimensionMismatchError("shift dimension differs from the lattice")
    return vecs


def report_for_decomposition(dec: CellDecomposition, shifts: Sequence[RationalVector]) -> FrameReport:
    """Assemble the frame verdict and optimal bounds from a decomposition over Gamma."""
    shifts = _check_shifts(shifts, dec.lattice.dim)
    cov = covolume(dec.lattice)
    per_cell = []
    lo, hi = math.inf, 0.0
    for cell in dec.cells:
        e = fiber_matrix(dec.fiber_points(cell), shifts)
        spec = hermitian_eigenvalues(e @ e.conj().T)
        cs = CellSpectrum(cell.fiber, cell.measure, spec)
        per_cell.append(cs)
        # rank-deficient cells contribute an exact zero lower bound
        lo = min(lo, spec.lambda_min if cs.full_rank else 0.0)
        hi = max(hi, spec.lambda_max)
    is_frame = all(c.full_rank for c in per_cell)
    a, b = float(cov) * lo, float(cov) * hi
    return FrameReport(
        is_frame=is_frame,
        lower_bound=a,
        upper_bound=b,
        tight=is_frame and abs(b - a) <= TIGHT_TOL * b,
        subtiling_level=dec.level,
        shifts_used=shifts,
        per_cell=tuple(per_cell),
        covolume=cov,
    )


def frame_check(omega: BoxRegion, lam: SeparableLattice, shifts: Sequence) -> FrameReport:
    """Decide whether the shifted exponentials over ``lam`` form a frame on ``omega``."""
    dec = decompose(omega, annihilator(lam))
    return report_for_decomposition(dec, shifts)


def riesz_check(delta: BoxRegion, lam: SeparableLattice, shifts: Sequence) -> FrameReport:
    """Riesz-basis test on an exact multitile whose multiplicity equals ``len(shifts)``.

    Raises:
        NotExactMultitileError: if ``delta`` is not an exact ``m``-tile of the
            dual lattice.
    """
    return riesz_report_for_decomposition(decompose(delta, annihilator(lam)), shifts)


def riesz_report_for_decomposition(dec: CellDecomposition, shifts: Sequence) -> FrameReport:
    m = len(shifts)
    if not is_exact_multitile(dec, m):
        raise NotExactMultitileError(f"region is not an exact {m}-tile of the dual lattice")
    rep = report_for_decomposition(dec, shifts)
    square = all(c.k == m for c in rep.per_cell)
    return dataclasses.replace(rep, riesz_basis=rep.is_frame and square)


def tightness_defect(omega: BoxRegion, lam: SeparableLattice, shifts: Sequence) -> float:
    return frame_check(omega, lam, shifts).tightness_defect
