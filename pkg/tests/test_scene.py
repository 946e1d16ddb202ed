import random
from fractions import Fraction as F
from pathlib import Path

import pytest

from expframes.errors import SceneParseError
from expframes.scene import parse_scene, parse_scene_text, scene_from_region, serialize_scene

from conftest import interval, random_lattice, random_region

SCENES = Path(__file__).resolve().parent.parent / "scenes"

EUCLIDEAN = """\
# two boxes in the plane
kind euclidean
dim 2
periods 1 1/2
box 0 0 : 1 1/2
box -1/3 1 : 2/3 3/2   # trailing comment
shift 0 0
shift 1/2 1/4
seed 11
max_attempts 9
objective min_condition
"""

FINITE = """\
kind finite
moduli 6 4
lambda_divisors 3 2
omega 0 0
omega 7 -1
shift 1 2
m 2
"""


def test_euclidean_literals():
    sc = parse_scene_text(EUCLIDEAN)
    assert sc.kind == "euclidean" and sc.dim == 2
    assert sc.periods == (1, F(1, 2))
    assert sc.boxes == (((0, 0), (1, F(1, 2))), ((F(-1, 3), 1), (F(2, 3), F(3, 2))))
    assert sc.shifts == ((0, 0), (F(1, 2), F(1, 4)))
    assert sc.params == {"seed": 11, "max_attempts": 9, "objective": "min_condition"}
    cfg = sc.search_config(seed=None, max_attempts=3)
    assert (cfg.seed, cfg.max_attempts, cfg.objective) == (11, 3, "min_condition")


def test_finite_literals():
    sc = parse_scene_text(FINITE)
    assert sc.moduli == (6, 4) and sc.lambda_divisors == (3, 2)
    assert sc.omega == ((0, 0), (1, 3))
    assert sc.shifts == ((1, 2),)
    fs = sc.finite_scene()
    assert fs.omega == ((0, 0), (1, 3))


@pytest.mark.parametrize("text", [EUCLIDEAN, FINITE])
def test_round_trip(text):
    sc = parse_scene_text(text)
    assert parse_scene_text(serialize_scene(sc)) == sc


@pytest.mark.parametrize("seed", range(25))
def test_round_trip_random(seed):
    rng = random.Random(seed)
    dim = rng.randint(1, 2)
    lam = random_lattice(rng, dim)
    shifts = [tuple(F(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(dim)) for _ in range(rng.randint(0, 3))]
    sc = scene_from_region(random_region(rng, dim), lam, shifts, seed=rng.randrange(100))
    again = parse_scene_text(serialize_scene(sc))
    assert again == sc
    assert again.region() == sc.region()


def test_bundled_scenes_parse():
    files = sorted(SCENES.glob("*.scene"))
    assert files
    for path in files:
        sc = parse_scene(path)
        assert parse_scene_text(serialize_scene(sc)) == sc
    assert parse_scene(SCENES / "two_level.scene").region() == interval(0, F(3, 2))


def test_float_period_rejected_naming_field():
    text = EUCLIDEAN.replace("periods 1 1/2", "periods 1 0.5")
    with pytest.raises(SceneParseError) as info:
        parse_scene_text(text)
    assert info.value.field == "periods" and info.value.line == 4
    assert "periods" in str(info.value) and "0.5" in str(info.value)


def test_divisor_must_divide_modulus():
    with pytest.raises(SceneParseError) as info:
        parse_scene_text(FINITE.replace("lambda_divisors 3 2", "lambda_divisors 4 2"))
    assert info.value.field == "lambda_divisors"


@pytest.mark.parametrize(
    "old, new, field",
    [
        ("seed 11", "colour blue", "colour"),
        ("seed 11", "seed 11\nseed 12", "seed"),
        ("seed 11", "moduli 4", "moduli"),
        ("box 0 0 : 1 1/2", "box 0 0 1 1/2", "box"),
        ("box 0 0 : 1 1/2", "box 1 0 : 1 1/2", "box"),
        ("shift 0 0", "shift 0", "shift"),
        ("max_attempts 9", "max_attempts 0", "max_attempts"),
        ("max_attempts 9", "max_attempts 3/2", "max_attempts"),
        ("objective min_condition", "objective fastest", "objective"),
        ("periods 1 1/2", "periods 1 0", "periods"),
        ("periods 1 1/2", "periods 1 1/0", "periods"),
        ("periods 1 1/2", "periods 1 1e3", "periods"),
        ("kind euclidean", "kind hyperbolic", "kind"),
        ("dim 2\n", "", "dim"),
    ],
)
def test_invalid_scene_fields(old, new, field):
    with pytest.raises(SceneParseError) as info:
        parse_scene_text(EUCLIDEAN.replace(old, new))
    assert info.value.field == field


def test_missing_kind():
    with pytest.raises(SceneParseError):
        parse_scene_text("dim 1\nperiods 1\nbox 0 : 1\n")
