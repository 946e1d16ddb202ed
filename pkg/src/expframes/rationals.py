"""Exact rational scalars and vectors.

A rational vector is a plain tuple of :class:`fractions.Fraction`. Floats are
rejected everywhere so that no rounding can enter the exact layers.
"""

from __future__ import annotations

import math
import numbers
from fractions import Fraction
from typing import Iterable, Tuple

RationalVector = Tuple[Fraction, ...]


def as_rational(x) -> Fraction:
    """Coerce ``x`` to a Fraction; accepts ints, Fractions and "a/b" strings."""
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, numbers.Integral):
        return Fraction(int(x))
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, numbers.Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"expected an exact rational, got {type(x).__name__} {x!r}")


def parse_rational(text: str) -> Fraction:
    """Parse ``"a"`` or ``"a/b"`` with integer a, b; decimal points are refused."""
    s = text.strip()
    if not s:
        raise ValueError("empty rational literal")
    num, sep, den = s.partition("/")
    for part in (num, den) if sep else (num,):
        body = part.strip()
        if body[:1] in "+-":
            body = body[1:]
        if not body.isdigit():
            raise ValueError(f"not an integer or a/b rational: {text!r}")
    if sep and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den)) if sep else Fraction(int(num))


def as_vector(xs: Iterable) -> RationalVector:
    if isinstance(xs, (str, bytes)) or not isinstance(xs, Iterable):
        xs = (xs,)
    return tuple(as_rational(x) for x in xs)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def vec_add(a: RationalVector, b: RationalVector) -> RationalVector:
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: RationalVector, b: RationalVector) -> RationalVector:
    return tuple(x - y for x, y in zip(a, b))


def vec_neg(a: RationalVector) -> RationalVector:
    return tuple(-x for x in a)


def floor_div(x: Fraction, p: Fraction) -> int:
    """Largest integer k with k*p <= x, for p > 0."""
    return math.floor(x / p)
