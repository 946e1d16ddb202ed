"""Command line entry point: ``expframes <mode> <scene-file> [options]``.

Exit status is 0 for affirmative verdicts, 1 for valid runs whose answer is
negative, and 2 for parse or precondition errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import random
import sys
from dataclasses import dataclass
from fractions import Fraction

from .errors import ExhaustedAttemptsError, ExpFramesError, SceneParseError
from .finite_oracle import (
    compare,
    fiber_bounds_finite,
    random_scene,
    transversal_size,
)
from .frames import FrameReport, frame_check
from .lattice import annihilator, covolume
from .rationals import format_rational, parse_rational
from .region import BoxRegion
from .scene import SceneFile, parse_scene, parse_scene_text, serialize_scene
from .shift_search import OBJECTIVES, SearchResult, optimize_shifts, pipeline_subtile_to_frame
from .tiling import complete_to_multitile, decompose, is_exact_multitile

MODES = ("analyze", "complete", "frame-check", "pipeline", "optimize", "oracle")
EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2


@dataclass
class Report:
    text: str
    document: dict


# -- JSON emission with 17 significant digits ---------------------------------

def _number(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null"
    s = format(x, ".17g")
    if s in ("-0",):
        s = "0"
    return s


def _escape(s: str) -> str:
    out = s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return f'"{out}"'


def dumps(obj, indent: int = 0) -> str:
    """Deterministic JSON with floats at 17 significant digits."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _number(obj)
    if isinstance(obj, str):
        return _escape(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{_escape(str(k))}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        items = [f"{inner}{dumps(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# -- document pieces ---------------------------------------------------------

def _vec(v) -> list:
    return [format_rational(Fraction(x)) for x in v]


def _region_doc(r: BoxRegion) -> list:
    return [{"lo": _vec(b.lo), "hi": _vec(b.hi)} for b in r.boxes]


def _scene_doc(scene: SceneFile) -> dict:
    return {"kind": scene.kind, "text": serialize_scene(scene)}


def _cells_doc(dec, report: FrameReport | None = None) -> list:
    spectra = {c.fiber: c.spectrum for c in report.per_cell} if report else {}
    rows = []
    for cell in dec.cells:
        row = {
            "fiber": [list(idx) for idx in cell.fiber],
            "k": cell.k,
            "measure": format_rational(cell.measure),
            "region": _region_doc(cell.region),
        }
        spec = spectra.get(cell.fiber)
        if spec is not None:
            row["eigenvalue_min"] = spec.lambda_min
            row["eigenvalue_max"] = spec.lambda_max
            row["rank"] = spec.rank
        rows.append(row)
    return rows


def _frame_doc(rep: FrameReport) -> dict:
    return {
        "is_frame": rep.is_frame,
        "A": rep.lower_bound,
        "B": rep.upper_bound,
        "tight": rep.tight,
        "tightness_defect": rep.tightness_defect,
        "shifts": [_vec(a) for a in rep.shifts_used],
    }


def _frame_text(rep: FrameReport, label: str = "frame-check") -> list:
    verdict = "frame" if rep.is_frame else "not a frame"
    if rep.riesz_basis is not None:
        verdict = "Riesz basis" if rep.riesz_basis else "not a Riesz basis"
    lines = [
        f"{label}: {verdict}",
        "  shifts: " + "; ".join(" ".join(_vec(a)) for a in rep.shifts_used),
        f"  A = {_number(rep.lower_bound)}",
        f"  B = {_number(rep.upper_bound)}",
        f"  tight: {'yes' if rep.tight else 'no'} (B - A = {_number(rep.tightness_defect)})",
    ]
    return lines


def _cell_text(dec) -> list:
    lines = [f"subtiling level: {dec.level}", f"cells: {len(dec.cells)}"]
    for cell in dec.cells:
        fib = ", ".join("(" + ",".join(map(str, idx)) + ")" for idx in cell.fiber)
        lines.append(f"  k={cell.k} fiber={{{fib}}} measure={format_rational(cell.measure)} region={cell.region}")
    lines.append(f"  empty cell measure={format_rational(dec.zero_cell.measure)}")
    return lines


# -- modes ---------------------------------------------------------------------

def _need_euclidean(scene: SceneFile, mode: str):
    if scene.kind != "euclidean":
        raise ExpFramesError(f"mode {mode!r} needs a euclidean scene")


def _shifts(scene: SceneFile, flags) -> tuple:
    if flags.get("shifts"):
        return tuple(flags["shifts"])
    return scene.shifts


def _base_doc(mode, scene) -> dict:
    return {"mode": mode, "scene": _scene_doc(scene)}


def _mode_analyze(scene, flags):
    _need_euclidean(scene, "analyze")
    gamma = annihilator(scene.lattice())
    dec = decompose(scene.region(), gamma)
    doc = _base_doc("analyze", scene)
    doc.update({
        "subtiling_level": dec.level,
        "covolume": format_rational(covolume(gamma)),
        "cells": _cells_doc(dec),
        "zero_cell": _region_doc(dec.zero_cell),
    })
    return Report("\n".join(["analyze"] + _cell_text(dec)), doc), EXIT_YES


def _mode_complete(scene, flags):
    _need_euclidean(scene, "complete")
    gamma = annihilator(scene.lattice())
    omega = scene.region()
    dec = decompose(omega, gamma)
    ell = flags.get("ell") or scene.params.get("ell") or dec.level
    delta = complete_to_multitile(omega, gamma, ell)
    exact = is_exact_multitile(decompose(delta, gamma), ell)
    doc = _base_doc("complete", scene)
    doc.update({
        "subtiling_level": dec.level,
        "ell": ell,
        "covolume": format_rational(covolume(gamma)),
        "delta": _region_doc(delta),
        "delta_measure": format_rational(delta.measure),
        "exact_multitile": exact,
    })
    text = _cell_text(dec) + [f"completion to a {ell}-tile: {delta}", f"  measure {format_rational(delta.measure)}"]
    return Report("\n".join(["complete"] + text), doc), EXIT_YES if exact else EXIT_NO


def _mode_frame_check(scene, flags):
    shifts = _shifts(scene, flags)
    if not shifts:
        raise ExpFramesError("frame-check requires shifts (scene 'shift' lines or --shifts)")
    doc = _base_doc("frame-check", scene)
    if scene.kind == "finite":
        fs = scene.finite_scene(shifts=tuple(tuple(int(t) for t in a) for a in shifts))
        a, b, ok = fiber_bounds_finite(fs)
        doc.update({"is_frame": ok, "A": a, "B": b, "transversal_size": transversal_size(fs)})
        text = [f"frame-check: {'frame' if ok else 'not a frame'}", f"  A = {_number(a)}", f"  B = {_number(b)}"]
        return Report("\n".join(text), doc), EXIT_YES if ok else EXIT_NO
    lam = scene.lattice()
    rep = frame_check(scene.region(), lam, shifts)
    dec = decompose(scene.region(), annihilator(lam))
    doc.update({"subtiling_level": rep.subtiling_level, "cells": _cells_doc(dec, rep)})
    doc.update(_frame_doc(rep))
    text = ["subtiling level: %d" % rep.subtiling_level] + _frame_text(rep)
    return Report("\n".join(text), doc), EXIT_YES if rep.is_frame else EXIT_NO


def _search_doc(res: SearchResult) -> dict:
    doc = {"attempts_used": res.attempts_used, "objective_value": res.objective_value}
    doc.update(_frame_doc(res.report))
    if res.delta is not None:
        doc["delta"] = _region_doc(res.delta)
        doc["delta_riesz_basis"] = bool(res.delta_report.riesz_basis)
        doc["delta_A"] = res.delta_report.lower_bound
        doc["delta_B"] = res.delta_report.upper_bound
    return doc


def _config(scene, flags):
    return scene.search_config(
        seed=flags.get("seed"), max_attempts=flags.get("max_attempts"), objective=flags.get("objective"),
    )


def _mode_pipeline(scene, flags):
    _need_euclidean(scene, "pipeline")
    lam = scene.lattice()
    res = pipeline_subtile_to_frame(scene.region(), lam, _config(scene, flags))
    dec = decompose(scene.region(), annihilator(lam))
    doc = _base_doc("pipeline", scene)
    doc.update({"subtiling_level": dec.level, "cells": _cells_doc(dec, res.report)})
    doc.update(_search_doc(res))
    text = _cell_text(dec) + [f"completion: {res.delta}"]
    text += _frame_text(res.delta_report, "on the completion")
    text += _frame_text(res.report, "on the region")
    text.append(f"attempts used: {res.attempts_used}")
    return Report("\n".join(["pipeline"] + text), doc), EXIT_YES if res.report.is_frame else EXIT_NO


def _mode_optimize(scene, flags):
    _need_euclidean(scene, "optimize")
    m = flags.get("m") or scene.params.get("m")
    if not m:
        raise ExpFramesError("optimize requires --m (or an 'm' line in the scene)")
    lam = scene.lattice()
    cfg = _config(scene, flags)
    if cfg.objective == "feasible" and not (flags.get("objective") or "objective" in scene.params):
        raise ExpFramesError("optimize requires --objective")
    res = optimize_shifts(scene.region(), lam, m, cfg)
    dec = decompose(scene.region(), annihilator(lam))
    doc = _base_doc("optimize", scene)
    doc.update({"subtiling_level": dec.level, "m": m, "objective": cfg.objective,
                "condition": res.report.condition, "cells": _cells_doc(dec, res.report)})
    doc.update(_search_doc(res))
    text = _cell_text(dec) + _frame_text(res.report, f"optimize ({cfg.objective})")
    text.append(f"  B/A = {_number(res.report.condition)}")
    return Report("\n".join(["optimize"] + text), doc), EXIT_YES


def _comparison_doc(sc, cmp) -> dict:
    return {
        "moduli": list(sc.moduli),
        "lambda_divisors": list(sc.lambda_divisors),
        "omega_size": len(sc.omega),
        "m": len(sc.shifts),
        "brute_A": cmp.brute_A, "brute_B": cmp.brute_B,
        "fiber_A": cmp.fiber_A, "fiber_B": cmp.fiber_B,
        "brute_is_frame": cmp.brute_is_frame, "fiber_is_frame": cmp.fiber_is_frame,
        "max_rel_err": cmp.max_rel_err, "agree": cmp.agree,
    }


def _mode_oracle(scene, flags):
    if scene.kind != "finite":
        raise ExpFramesError("mode 'oracle' needs a finite scene")
    scenes = []
    if scene.shifts:
        scenes.append(scene.finite_scene())
    count = flags.get("random") or 0
    if count:
        seed = flags.get("seed")
        rng = random.Random(scene.params.get("seed", 0) if seed is None else seed)
        scenes.extend(random_scene(rng) for _ in range(count))
    if not scenes:
        raise ExpFramesError("oracle needs scene shifts or --random N")
    rows = [_comparison_doc(sc, compare(sc)) for sc in scenes]
    ok = all(r["agree"] for r in rows)
    worst = max(r["max_rel_err"] for r in rows)
    doc = _base_doc("oracle", scene)
    doc.update({"scenes": len(rows), "all_agree": ok, "max_rel_err": worst, "comparisons": rows})
    verdict = "all agree" if ok else f"{sum(not r['agree'] for r in rows)} disagreements"
    text = [f"oracle: {len(rows)} scenes, {verdict}", f"  worst relative error {_number(worst)}"]
    return Report("\n".join(text), doc), EXIT_YES if ok else EXIT_NO


def scene_from_report(doc: dict) -> SceneFile:
    """Rebuild the scene of a machine-readable report, with the shifts it reports."""
    scene = parse_scene_text(doc["scene"]["text"])
    if "shifts" in doc:
        shifts = tuple(tuple(parse_rational(t) for t in a) for a in doc["shifts"])
        if scene.kind == "finite":
            shifts = tuple(tuple(int(t) for t in a) for a in shifts)
        scene = dataclasses.replace(scene, shifts=shifts)
    return scene


_DISPATCH = {
    "analyze": _mode_analyze,
    "complete": _mode_complete,
    "frame-check": _mode_frame_check,
    "pipeline": _mode_pipeline,
    "optimize": _mode_optimize,
    "oracle": _mode_oracle,
}


def run(mode: str, scene_path, flags: dict | None = None) -> tuple[Report, int]:
    """Run one mode on a scene file; returns the report and the exit status."""
    flags = flags or {}
    if mode not in _DISPATCH:
        return Report(f"error: unknown mode {mode!r}", {"mode": mode, "error": "unknown mode"}), EXIT_ERROR
    try:
        scene = parse_scene(scene_path)
        return _DISPATCH[mode](scene, flags)
    except (ExpFramesError, ValueError, OSError) as exc:
        if isinstance(exc, ExhaustedAttemptsError):
            msg = f"search exhausted after {exc.attempts} attempts: {exc}"
        else:
            msg = str(exc)
        kind = "parse" if isinstance(exc, SceneParseError) else type(exc).__name__
        return Report(f"error: {msg}", {"mode": mode, "error": msg, "error_kind": kind}), EXIT_ERROR


def _shift_arg(text: str) -> tuple:
    try:
        return tuple(parse_rational(t) for t in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="expframes", description=__doc__.splitlines()[0])
    p.add_argument("mode", choices=MODES)
    p.add_argument("scene", help="scene file")
    p.add_argument("--ell", type=int, help="multiplicity for 'complete' (default: subtiling level)")
    p.add_argument("--m", type=int, help="number of shifts for 'optimize'")
    p.add_argument("--shifts", nargs="+", type=_shift_arg, metavar="A",
                   help="shifts as comma-separated coordinates, e.g. 0,0 1/2,1/3")
    p.add_argument("--seed", type=int)
    p.add_argument("--max-attempts", type=int, dest="max_attempts")
    p.add_argument("--objective", choices=OBJECTIVES)
    p.add_argument("--random", type=int, metavar="N", help="oracle: also compare N seeded random scenes")
    p.add_argument("--json", metavar="PATH", help="write the machine-readable report here")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_YES
    flags = {k: v for k, v in vars(args).items() if k not in ("mode", "scene", "json")}
    report, status = run(args.mode, args.scene, flags)
    print(report.text, file=sys.stderr if status == EXIT_ERROR else sys.stdout)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(dumps(report.document) + "\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
