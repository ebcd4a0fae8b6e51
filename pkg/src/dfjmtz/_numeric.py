"""Scalar helpers shared by every module.

Two scalar modes exist: exact (``fractions.Fraction``, ints are promoted) and
float.  A collection is in float mode as soon as it contains one float.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

Scalar = Union[Fraction, float]

EPS = 1e-9


def coerce(value) -> Scalar:
    """Promote ints (and bools) to Fraction, keep Fraction and float."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"unsupported scalar type: {type(value).__name__}")


def any_float(values: Iterable) -> bool:
    return any(isinstance(v, float) for v in values)


def tolerance(is_float: bool) -> float:
    return EPS if is_float else 0


def to_text(value: Scalar) -> str:
    """Render a scalar for JSON/TSPLIB: ``"p/q"`` (or ``"p"``) for rationals."""
    if isinstance(value, float):
        return repr(value)
    return str(Fraction(value))


def from_text(token) -> Scalar:
    """Inverse of :func:`to_text`; also accepts JSON numbers."""
    if isinstance(token, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(token, (int, float, Fraction)):
        return coerce(token)
    if isinstance(token, str):
        return Fraction(token.strip())
    raise TypeError(f"cannot parse scalar from {token!r}")
