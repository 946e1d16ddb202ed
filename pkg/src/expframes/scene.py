"""Line-oriented scene files.

Each non-blank line is ``<key> <values...>``; ``#`` starts a comment. Keys
``box``, ``shift`` and ``omega`` may repeat, every other key appears at most
once. Numbers are integers or ``a/b`` rationals; decimal literals are
rejected so every input stays exact. See README.md for the full grammar.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import SceneParseError
from .finite_oracle import FiniteScene
from .lattice import SeparableLattice
from .rationals import format_rational, parse_rational
from .region import BoxRegion, canonicalize
from .shift_search import OBJECTIVES, SearchConfig

KINDS = ("euclidean", "finite")
_REPEATED = {"box", "shift", "omega"}
_COMMON = {"kind", "shift", "ell", "m", "seed", "max_attempts", "denominator_bound", "objective"}
_ALLOWED = {
    "euclidean": _COMMON | {"dim", "periods", "box"},
    "finite": _COMMON | {"moduli", "lambda_divisors", "omega"},
}
_INT_PARAMS = ("ell", "m", "seed", "max_attempts", "denominator_bound")


@dataclass(frozen=True)
class SceneFile:
    kind: str
    dim: int
    periods: tuple = ()
    boxes: tuple = ()  # ((lo...), (hi...)) pairs
    shifts: tuple = ()
    moduli: tuple = ()
    lambda_divisors: tuple = ()
    omega: tuple = ()  # finite elements
    params: dict = field(default_factory=dict, compare=True, hash=False)

    def region(self) -> BoxRegion:
        return canonicalize(self.boxes, self.dim)

    def lattice(self) -> SeparableLattice:
        return SeparableLattice(self.periods)

    def finite_scene(self, shifts=None) -> FiniteScene:
        return FiniteScene(self.moduli, self.lambda_divisors, self.omega, tuple(shifts or self.shifts))

    def search_config(self, **overrides) -> SearchConfig:
        opts = {k: self.params[k] for k in ("seed", "max_attempts", "denominator_bound", "objective") if k in self.params}
        opts.update({k: v for k, v in overrides.items() if v is not None})
        return SearchConfig(**opts)


def _rational(token: str, line: int, key: str) -> Fraction:
    if any(c in token for c in ".eE"):
        raise SceneParseError(f"floating literal {token!r} is not allowed; use a/b", line, key)
    try:
        return parse_rational(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise SceneParseError(str(exc), line, key) from None


def _integer(token: str, line: int, key: str) -> int:
    q = _rational(token, line, key)
    if q.denominator != 1 or "/" in token:
        raise SceneParseError(f"expected an integer, got {token!r}", line, key)
    return int(q)


def parse_scene_text(text: str) -> SceneFile:
    """Parse and validate scene text; errors carry the offending line and field."""
    raw: dict[str, list] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        key, *values = body.split()
        if key not in _ALLOWED["euclidean"] | _ALLOWED["finite"]:
            raise SceneParseError(f"unknown field {key!r}", lineno, key)
        if key not in _REPEATED and key in raw:
            raise SceneParseError("field given twice", lineno, key)
        raw.setdefault(key, []).append((lineno, values))

    if "kind" not in raw:
        raise SceneParseError("missing 'kind' line", field="kind")
    lineno, values = raw["kind"][0]
    if len(values) != 1 or values[0] not in KINDS:
        raise SceneParseError(f"kind must be one of {KINDS}", lineno, "kind")
    kind = values[0]
    for key, entries in raw.items():
        if key not in _ALLOWED[kind]:
            raise SceneParseError(f"field not valid for {kind} scenes", entries[0][0], key)

    params = {}
    for key in _INT_PARAMS:
        if key in raw:
            lineno, values = raw[key][0]
            if len(values) != 1:
                raise SceneParseError("expected one integer", lineno, key)
            params[key] = _integer(values[0], lineno, key)
    if "objective" in raw:
        lineno, values = raw["objective"][0]
        if len(values) != 1 or values[0] not in OBJECTIVES:
            raise SceneParseError(f"objective must be one of {OBJECTIVES}", lineno, "objective")
        params["objective"] = values[0]
    for key in ("ell", "m", "max_attempts"):
        if key in params and params[key] < 1:
            raise SceneParseError("must be positive", raw[key][0][0], key)
    if "denominator_bound" in params and params["denominator_bound"] < 2:
        raise SceneParseError("must be at least 2", raw["denominator_bound"][0][0], "denominator_bound")

    if kind == "euclidean":
        return _euclidean(raw, params)
    return _finite(raw, params)


def _require(raw, key):
    if key not in raw:
        raise SceneParseError("required field missing", field=key)
    return raw[key]


def _vector(values, lineno, key, dim, convert):
    if len(values) != dim:
        raise SceneParseError(f"expected {dim} coordinates, got {len(values)}", lineno, key)
    return tuple(convert(v, lineno, key) for v in values)


def _euclidean(raw, params) -> SceneFile:
    lineno, values = _require(raw, "dim")[0]
    if len(values) != 1:
        raise SceneParseError("expected one integer", lineno, "dim")
    dim = _integer(values[0], lineno, "dim")
    if dim < 1:
        raise SceneParseError("dimension must be positive", lineno, "dim")
    lineno, values = _require(raw, "periods")[0]
    periods = _vector(values, lineno, "periods", dim, _rational)
    if any(p <= 0 for p in periods):
        raise SceneParseError("periods must be positive", lineno, "periods")
    boxes = []
    for lineno, values in _require(raw, "box"):
        if values.count(":") != 1:
            raise SceneParseError("box needs 'lo... : hi...'", lineno, "box")
        cut = values.index(":")
        lo = _vector(values[:cut], lineno, "box", dim, _rational)
        hi = _vector(values[cut + 1:], lineno, "box", dim, _rational)
        if any(a >= b for a, b in zip(lo, hi)):
            raise SceneParseError("box must satisfy lo < hi on every axis", lineno, "box")
        boxes.append((lo, hi))
    shifts = tuple(_vector(v, n, "shift", dim, _rational) for n, v in raw.get("shift", []))
    return SceneFile("euclidean", dim, periods=periods, boxes=tuple(boxes), shifts=shifts, params=params)


def _finite(raw, params) -> SceneFile:
    lineno, values = _require(raw, "moduli")[0]
    moduli = tuple(_integer(v, lineno, "moduli") for v in values)
    if not moduli or any(n < 2 for n in moduli):
        raise SceneParseError("moduli must be integers >= 2", lineno, "moduli")
    dim = len(moduli)
    lineno, values = _require(raw, "lambda_divisors")[0]
    divs = _vector(values, lineno, "lambda_divisors", dim, _integer)
    for n, d in zip(moduli, divs):
        if d < 1 or n % d:
            raise SceneParseError(f"{d} does not divide {n}", lineno, "lambda_divisors")
    omega = []
    for lineno, values in _require(raw, "omega"):
        elem = _vector(values, lineno, "omega", dim, _integer)
        omega.append(tuple(t % n for t, n in zip(elem, moduli)))
    shifts = tuple(
        tuple(t % n for t, n in zip(_vector(v, ln, "shift", dim, _integer), moduli))
        for ln, v in raw.get("shift", [])
    )
    return SceneFile(
        "finite", dim, shifts=shifts, moduli=moduli, lambda_divisors=divs,
        omega=tuple(omega), params=params,
    )


def parse_scene(path) -> SceneFile:
    return parse_scene_text(Path(path).read_text())


def serialize_scene(scene: SceneFile) -> str:
    """Inverse of :func:`parse_scene_text` (comments and layout are not preserved)."""
    fmt = lambda xs: " ".join(format_rational(x) if isinstance(x, Fraction) else str(x) for x in xs)
    lines = [f"kind {scene.kind}"]
    if scene.kind == "euclidean":
        lines.append(f"dim {scene.dim}")
        lines.append(f"periods {fmt(scene.periods)}")
        lines.extend(f"box {fmt(lo)} : {fmt(hi)}" for lo, hi in scene.boxes)
    else:
        lines.append(f"moduli {fmt(scene.moduli)}")
        lines.append(f"lambda_divisors {fmt(scene.lambda_divisors)}")
        lines.extend(f"omega {fmt(w)}" for w in scene.omega)
    lines.extend(f"shift {fmt(a)}" for a in scene.shifts)
    for key in _INT_PARAMS + ("objective",):
        if key in scene.params:
            lines.append(f"{key} {scene.params[key]}")
    return "\n".join(lines) + "\n"


def scene_from_region(region: BoxRegion, lattice: SeparableLattice, shifts=(), **params) -> SceneFile:
    boxes = tuple((b.lo, b.hi) for b in region.boxes)
    return SceneFile("euclidean", lattice.dim, periods=lattice.periods, boxes=boxes,
                     shifts=tuple(tuple(a) for a in shifts), params=params)
