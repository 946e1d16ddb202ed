"""Ground truth on finite groups ``Z_N1 x ... x Z_Nd``.

The dual group is identified with the group itself through the pairing
``e_g(w) = exp(2 pi i sum_i g_i w_i / N_i)``; both sides carry counting
measure. The brute-force path builds the frame operator of the exponentials
on ``L^2(Omega)`` from raw characters and never touches the cell machinery,
so it can be compared against the fiberwise bounds.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import SizeExceededError
from .frames import fiber_matrix, hermitian_eigenvalues

MAX_BRUTE_OMEGA = 4096
AGREE_TOL = 1e-8
_BRUTE_RANK_TOL = 1e-9


@dataclass(frozen=True)
class FiniteScene:
    """Subset ``omega`` of the dual of ``prod Z_{N_i}`` with lattice ``prod d_i Z_{N_i}``."""

    moduli: tuple
    lambda_divisors: tuple
    omega: tuple
    shifts: tuple

    def __post_init__(self):
        moduli = tuple(int(n) for n in self.moduli)
        divs = tuple(int(d) for d in self.lambda_divisors)
        if not moduli:
            raise ValueError("at least one cyclic factor is required")
        if len(divs) != len(moduli):
            raise ValueError("lambda_divisors and moduli differ in length")
        if any(n < 2 for n in moduli):
            raise ValueError(f"moduli must be >= 2, got {moduli}")
        for n, d in zip(moduli, divs):
            if d < 1 or n % d:
                raise ValueError(f"divisor {d} does not divide modulus {n}")
        omega = tuple(sorted({self._reduce(w, moduli) for w in self.omega}))
        if not omega:
            raise ValueError("omega must be nonempty")
        shifts = tuple(self._reduce(a, moduli) for a in self.shifts)
        if not shifts:
            raise ValueError("at least one shift is required")
        object.__setattr__(self, "moduli", moduli)
        object.__setattr__(self, "lambda_divisors", divs)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "shifts", shifts)

    @staticmethod
    def _reduce(x, moduli) -> tuple:
        x = (x,) if isinstance(x, int) else tuple(x)
        if len(x) != len(moduli):
            raise ValueError(f"element {x} has the wrong dimension")
        return tuple(int(t) % n for t, n in zip(x, moduli))

    @property
    def dim(self) -> int:
        return len(self.moduli)

    @property
    def group_order(self) -> int:
        return math.prod(self.moduli)


@dataclass(frozen=True)
class FiniteSubgroup:
    """The subgroup ``prod g_i Z_{N_i}`` generated axis-wise by ``generators``."""

    moduli: tuple
    generators: tuple

    @property
    def order(self) -> int:
        return math.prod(n // g for n, g in zip(self.moduli, self.generators))

    def elements(self) -> list:
        axes = [range(0, n, g) for n, g in zip(self.moduli, self.generators)]
        return list(itertools.product(*axes))


def finite_lattice(scene: FiniteScene) -> FiniteSubgroup:
    return FiniteSubgroup(scene.moduli, scene.lambda_divisors)


def finite_annihilator(scene: FiniteScene) -> FiniteSubgroup:
    """Annihilator of ``prod d_i Z_{N_i}``: generated axis-wise by ``N_i / d_i``."""
    return FiniteSubgroup(
        scene.moduli, tuple(n // d for n, d in zip(scene.moduli, scene.lambda_divisors))
    )


def transversal_size(scene: FiniteScene) -> int:
    """Counting measure of the fundamental domain of the annihilator."""
    return math.prod(n // d for n, d in zip(scene.moduli, scene.lambda_divisors))


def brute_force_bounds(scene: FiniteScene) -> tuple[float, float, bool]:
    """Extreme eigenvalues of the frame operator ``sum v v^*`` on ``C^Omega``.

    Raises:
        SizeExceededError: if ``|Omega| > 4096``.
    """
    if len(scene.omega) > MAX_BRUTE_OMEGA:
        raise SizeExceededError(f"|omega| = {len(scene.omega)} exceeds {MAX_BRUTE_OMEGA}")
    moduli = np.array(scene.moduli, dtype=np.int64)
    big = math.lcm(*scene.moduli)
    weights = big // moduli
    lam = np.array(
        list(itertools.product(*[range(0, n, d) for n, d in zip(scene.moduli, scene.lambda_divisors)])),
        dtype=np.int64,
    )
    freqs = np.concatenate([(lam + np.array(a)) % moduli for a in scene.shifts])
    omega = np.array(scene.omega, dtype=np.int64)
    # integer phase numerators modulo lcm(N)
    num = ((omega * weights) @ freqs.T) % big
    v = np.exp(2j * np.pi * num / big)
    s = v @ v.conj().T
    eig = np.linalg.eigvalsh(s)
    lo, hi = float(eig[0]), float(eig[-1])
    is_frame = lo > _BRUTE_RANK_TOL * hi
    return (lo if is_frame else 0.0), hi, is_frame


def fiber_bounds_finite(scene: FiniteScene) -> tuple[float, float, bool]:
    """Fiberwise optimal bounds over a transversal of the annihilator."""
    gamma = finite_annihilator(scene)
    members = set(scene.omega)
    gammas = gamma.elements()
    q_size = transversal_size(scene)
    shifts = [tuple(Fraction(t) for t in a) for a in scene.shifts]
    lo, hi = math.inf, 0.0
    is_frame = True
    for w in itertools.product(*[range(g) for g in gamma.generators]):
        fiber = [
            g for g in gammas
            if tuple((x + y) % n for x, y, n in zip(w, g, scene.moduli)) in members
        ]
        if not fiber:
            continue
        # gamma / N pairs with shifts through the ordinary dot product
        scaled = [tuple(Fraction(t, n) for t, n in zip(g, scene.moduli)) for g in fiber]
        e = fiber_matrix(scaled, shifts)
        spec = hermitian_eigenvalues(e @ e.conj().T)
        full = spec.rank == len(fiber)
        is_frame &= full
        lo = min(lo, spec.lambda_min if full else 0.0)
        hi = max(hi, spec.lambda_max)
    return q_size * lo, q_size * hi, is_frame


@dataclass(frozen=True)
class OracleComparison:
    brute_A: float
    brute_B: float
    fiber_A: float
    fiber_B: float
    brute_is_frame: bool
    fiber_is_frame: bool
    max_rel_err: float
    agree: bool


def _rel(x: float, y: float) -> float:
    scale = max(abs(x), abs(y))
    return 0.0 if scale == 0 else abs(x - y) / scale


def compare(scene: FiniteScene) -> OracleComparison:
    ba, bb, bf = brute_force_bounds(scene)
    fa, fb, ff = fiber_bounds_finite(scene)
    err = max(_rel(ba, fa), _rel(bb, fb))
    return OracleComparison(ba, bb, fa, fb, bf, ff, err, bf == ff and err <= AGREE_TOL)


def random_scene(
    rng: random.Random,
    max_modulus: int = 32,
    max_dim: int = 2,
    max_omega: int = 64,
    max_shifts: int = 4,
) -> FiniteScene:
    """Draw a random valid scene; sizes are capped by the keyword limits."""
    dim = rng.randint(1, max_dim)
    moduli = tuple(rng.randint(2, max_modulus) for _ in range(dim))
    divs = tuple(rng.choice([d for d in range(1, n + 1) if n % d == 0]) for n in moduli)
    order = math.prod(moduli)
    size = rng.randint(1, min(max_omega, order))
    flat = rng.sample(range(order), size)
    omega = [tuple(int(t) for t in np.unravel_index(f, moduli)) for f in flat]
    m = rng.randint(1, max_shifts)
    shifts = [tuple(rng.randrange(n) for n in moduli) for _ in range(m)]
    return FiniteScene(moduli, divs, tuple(omega), tuple(shifts))


def parseval_scene(moduli: Sequence[int], lambda_divisors: Sequence[int]) -> FiniteScene:
    """Omega equal to the canonical transversal of the annihilator, single zero shift."""
    gens = [n // d for n, d in zip(moduli, lambda_divisors)]
    omega = tuple(itertools.product(*[range(g) for g in gens]))
    return FiniteScene(tuple(moduli), tuple(lambda_divisors), omega, ((0,) * len(moduli),))
