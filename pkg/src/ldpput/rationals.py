"""Helpers for exact rational scalars and their text form."""

from __future__ import annotations

from fractions import Fraction


def as_fraction(value) -> Fraction:
    """Coerce ints, strings like "3/2", and Fractions to Fraction.

    Floats are rejected: exact call sites must not smuggle in binary
    rounding by accident.  Use Fraction(float) explicitly when a float
    really is the intended exact value.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_fraction(value: Fraction) -> str:
    """Render a Fraction as "p/q", or just "p" for integers."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
