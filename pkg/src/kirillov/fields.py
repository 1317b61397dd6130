"""Exact scalar fields.

A field object exposes ``zero``, ``one`` and is callable to coerce plain
integers or fractions into its element type. Every linear-algebra kernel in
the package is written against this small surface, so the same code runs over
the rationals and over number fields given by a multiplication table
(see :mod:`kirillov.res_scalars`).
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from .errors import MalformedRational


def parse_rational(value) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an integer into a Fraction.

    Floats are refused: nothing in the package is allowed to round.
    """
    if isinstance(value, bool):
        raise MalformedRational(f"not a rational: {value!r}")
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(ch in text for ch in ".eE") or text.count("/") > 1:
            raise MalformedRational(f"not a rational: {value!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedRational(f"not a rational: {value!r}") from exc
    raise MalformedRational(f"not a rational: {value!r}")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class RationalField:
    name = "QQ"
    degree = 1
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        return parse_rational(x)

    def format(self, x) -> str:
        return format_rational(x)

    def parse(self, value) -> Fraction:
        return parse_rational(value)

    def __repr__(self):
        return "QQ"

    def __reduce__(self):
        return (_get_qq, ())


def _get_qq():
    return QQ


QQ = RationalField()
