"""Exact rational helpers shared across the package.

All quantities in this package are `fractions.Fraction`; ratios that
diverge (e.g. a price of anarchy over a zero-cost optimum side) are the
tagged :data:`INFINITY` value, never a float sentinel.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union


class Infinity:
    """Tagged positive infinity, totally ordered above every Fraction.

    Deliberately supports no arithmetic: code that would add or scale an
    infinite bound must handle the case explicitly.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "inf"

    def __eq__(self, other: object) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("gamelab-infinity")

    def __lt__(self, other: object) -> bool:
        return False

    def __le__(self, other: object) -> bool:
        return other is self

    def __gt__(self, other: object) -> bool:
        return other is not self

    def __ge__(self, other: object) -> bool:
        return True


INFINITY = Infinity()

Extended = Union[Fraction, Infinity]


def is_infinite(value: Extended) -> bool:
    return value is INFINITY


def parse_rational(text) -> Fraction:
    """Parse an exact rational from an int, or a "p" / "p/q" string."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, str):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {text!r}") from exc
    raise ValueError(f"not a rational: {text!r}")


def format_rational(value: Extended):
    """Render for a document: plain int when integral, else "p/q" string."""
    if value is INFINITY:
        return "inf"
    if value.denominator == 1:
        return int(value)
    return f"{value.numerator}/{value.denominator}"


def rational_str(value: Extended) -> str:
    """Render for line-oriented report output ("p/q", "p" or "inf")."""
    if value is INFINITY:
        return "inf"
    return str(value)
