"""Constructive search for frame and Riesz shifts, and optimization of the bounds.

Candidate shifts are random rationals of bounded denominator inside the
fundamental domain of ``Lambda``, with the first shift pinned to 0 (a common
translate of all shifts leaves every cell Gram matrix unchanged). Every
candidate is verified with the same exact frame test used everywhere else.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import ExhaustedAttemptsError, PreconditionViolationError
from .frames import FrameReport, report_for_decomposition, riesz_report_for_decomposition
from .lattice import SeparableLattice, annihilator
from .region import BoxRegion
from .tiling import complete_to_multitile, decompose

OBJECTIVES = ("feasible", "max_lower_bound", "min_condition")
_GOLDEN = (math.sqrt(5) - 1) / 2
_LINE_TOL = 1e-9
_SWEEPS = 6
_N_STARTS = 3


@dataclass(frozen=True)
class SearchConfig:
    max_attempts: int = 64
    seed: int = 0
    denominator_bound: int = 64
    objective: str = "feasible"

    def __post_init__(self):
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")
        if self.denominator_bound < 2:
            raise ValueError("denominator_bound must be >= 2")
        if self.objective not in OBJECTIVES:
            raise ValueError(f"objective must be one of {OBJECTIVES}, got {self.objective!r}")


@dataclass(frozen=True)
class SearchResult:
    shifts: tuple
    report: FrameReport
    attempts_used: int
    delta: BoxRegion | None = None
    delta_report: FrameReport | None = None
    objective_value: float | None = None


def objective_value(report: FrameReport, objective: str) -> float:
    """Larger is better; non-frames score ``-inf``."""
    if not report.is_frame:
        return -math.inf
    if objective == "max_lower_bound":
        return report.lower_bound
    if objective == "min_condition":
        return -report.condition
    return 0.0


def random_shift(rng: random.Random, lam: SeparableLattice, bound: int) -> tuple:
    coords = []
    for p in lam.periods:
        q = rng.randint(2, bound)
        coords.append(p * Fraction(rng.randrange(q), q))
    return tuple(coords)


def _candidate(rng, lam, m, bound) -> tuple:
    zero = (Fraction(0),) * lam.dim
    return (zero,) + tuple(random_shift(rng, lam, bound) for _ in range(m - 1))


def _require_level(level: int, m: int):
    if m < level:
        raise PreconditionViolationError(
            f"{m} shifts cannot give a frame: the subtiling level is {level}"
        )


def find_frame_shifts(omega: BoxRegion, lam: SeparableLattice, m: int, cfg: SearchConfig = SearchConfig()) -> SearchResult:
    """Random search for ``m`` shifts that make the exponentials a frame on ``omega``.

    Raises:
        PreconditionViolationError: if ``m`` is below the subtiling level, where
            no frame can exist.
        ExhaustedAttemptsError: if ``cfg.max_attempts`` candidates all fail.
    """
    dec = decompose(omega, annihilator(lam))
    _require_level(dec.level, m)
    rng = random.Random(cfg.seed)
    best = None
    for attempt in range(1, cfg.max_attempts + 1):
        shifts = _candidate(rng, lam, m, cfg.denominator_bound)
        rep = report_for_decomposition(dec, shifts)
        if rep.is_frame:
            return SearchResult(shifts, rep, attempt, objective_value=objective_value(rep, cfg.objective))
        if best is None or rep.lower_bound > best[1].lower_bound:
            best = (shifts, rep)
    raise ExhaustedAttemptsError(
        f"no frame among {cfg.max_attempts} candidates", best=best, attempts=cfg.max_attempts
    )


def pipeline_subtile_to_frame(omega: BoxRegion, lam: SeparableLattice, cfg: SearchConfig = SearchConfig()) -> SearchResult:
    """Complete ``omega`` to an exact multitile, find Riesz shifts there, confirm a frame on ``omega``.

    The multiplicity used is the subtiling level ``l`` of ``omega``; the
    returned result carries the completion and its Riesz report.
    """
    gamma = annihilator(lam)
    dec = decompose(omega, gamma)
    ell = dec.level
    delta = complete_to_multitile(omega, gamma, ell)
    dec_delta = decompose(delta, gamma)
    rng = random.Random(cfg.seed)
    best = None
    for attempt in range(1, cfg.max_attempts + 1):
        shifts = _candidate(rng, lam, ell, cfg.denominator_bound)
        riesz = riesz_report_for_decomposition(dec_delta, shifts)
        if not riesz.riesz_basis:
            if best is None or riesz.lower_bound > best[1].lower_bound:
                best = (shifts, riesz)
            continue
        rep = report_for_decomposition(dec, shifts)
        if rep.is_frame:
            return SearchResult(
                shifts, rep, attempt, delta=delta, delta_report=riesz,
                objective_value=objective_value(rep, cfg.objective),
            )
    raise ExhaustedAttemptsError(
        f"no Riesz shifts among {cfg.max_attempts} candidates", best=best, attempts=cfg.max_attempts
    )


def _golden_max(f: Callable[[float], float], a: float, b: float, tol: float) -> float:
    """Golden-section search for a maximizer of ``f`` on ``[a, b]``."""
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return (a + b) / 2


def _snap(t: float, p: Fraction, bound: int) -> Fraction:
    """Nearest rational multiple of ``p`` in ``[0, p)`` with denominator at most ``bound``."""
    r = Fraction(t / float(p)).limit_denominator(bound) % 1
    return p * r


def _refine(dec, lam, start, value, objective, bound):
    """Coordinate-wise golden-section ascent from ``start``; only snapped improvements are kept."""
    shifts = [list(a) for a in start]
    best_val = value
    evaluations = 0

    def score(cand) -> float:
        nonlocal evaluations
        evaluations += 1
        return objective_value(report_for_decomposition(dec, cand), objective)

    for sweep in range(_SWEEPS):
        improved = False
        for j in range(1, len(shifts)):
            for i, p in enumerate(lam.periods):
                width = float(p) * 0.5 ** sweep
                center = float(shifts[j][i])

                def line(t, j=j, i=i):
                    cand = [tuple(row) for row in shifts]
                    cand[j] = cand[j][:i] + (Fraction(t),) + cand[j][i + 1:]
                    return score(cand)

                t = _golden_max(line, center - width / 2, center + width / 2, _LINE_TOL * float(p))
                snapped = _snap(t, p, bound)
                if snapped == shifts[j][i]:
                    continue
                trial = [list(row) for row in shifts]
                trial[j][i] = snapped
                val = score([tuple(row) for row in trial])
                if val > best_val:
                    shifts, best_val, improved = trial, val, True
        if not improved and sweep > 0:
            break
    return tuple(tuple(row) for row in shifts), best_val


def optimize_shifts(omega: BoxRegion, lam: SeparableLattice, m: int, cfg: SearchConfig = SearchConfig()) -> SearchResult:
    """Multi-start derivative-free maximization of the configured objective.

    ``cfg.max_attempts`` random candidates are drawn; the best feasible ones
    seed a coordinate-wise golden-section refinement whose iterates are snapped
    to rationals with denominator at most ``2 * cfg.denominator_bound`` and
    re-verified. The result is never worse than the best random start and is
    always a frame.
    """
    dec = decompose(omega, annihilator(lam))
    _require_level(dec.level, m)
    rng = random.Random(cfg.seed)
    starts = []
    for attempt in range(1, cfg.max_attempts + 1):
        shifts = _candidate(rng, lam, m, cfg.denominator_bound)
        rep = report_for_decomposition(dec, shifts)
        if rep.is_frame:
            starts.append((objective_value(rep, cfg.objective), attempt, shifts))
    if not starts:
        raise ExhaustedAttemptsError(f"no feasible start among {cfg.max_attempts} candidates",
                                     attempts=cfg.max_attempts)
    # ties go to the lowest attempt index
    starts.sort(key=lambda s: (-s[0], s[1]))
    if cfg.objective == "feasible" or m == 1:
        value, attempt, shifts = min(starts, key=lambda s: s[1])
        return SearchResult(shifts, report_for_decomposition(dec, shifts), attempt, objective_value=value)
    best = None
    for value, attempt, shifts in starts[:_N_STARTS]:
        refined, val = _refine(dec, lam, shifts, value, cfg.objective, 2 * cfg.denominator_bound)
        if best is None or val > best[0]:
            best = (val, attempt, refined)
    val, _, shifts = best
    rep = report_for_decomposition(dec, shifts)
    return SearchResult(shifts, rep, cfg.max_attempts, objective_value=val)
