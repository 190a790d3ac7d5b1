# core/numeric.py
"""
Number handling shared by every module.

Schemes run in one of two modes. Exact mode keeps every length and
coordinate as a Fraction and compares with ==. Float mode (the NBT family)
stores floats and compares against an explicit tolerance.
"""

import math
import re
from fractions import Fraction
from typing import Union

Number = Union[Fraction, float, int]

_RATIONAL = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")
_DECIMAL = re.compile(r"^\s*[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?\s*$")


def is_exact(x) -> bool:
    return isinstance(x, (Fraction, int)) and not isinstance(x, bool)


def parse_number(text, exact: bool = True) -> Number:
    """Parse "p/q", an integer or a decimal string; exact mode keeps decimals as Fractions."""
    if isinstance(text, (int, Fraction)) and not isinstance(text, bool):
        return Fraction(text) if exact else float(text)
    if isinstance(text, float):
        return Fraction(text) if exact else text
    s = str(text).strip()
    if _RATIONAL.match(s):
        value = Fraction(s.replace(" ", ""))
        return value if exact else float(value)
    if _DECIMAL.match(s):
        return Fraction(s) if exact else float(s)
    raise ValueError(f"not a number: {text!r}")


def format_number(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def as_fraction(x) -> Fraction:
    """Exact value of the binary float (or the Fraction itself)."""
    return x if isinstance(x, Fraction) else Fraction(x)


def to_float(x) -> float:
    return float(x)


def sqrt_number(q: Number) -> Number:
    """Square root, exact when q is the square of a rational."""
    if is_exact(q):
        q = Fraction(q)
        if q < 0:
            raise ValueError("negative square")
        num, den = math.isqrt(q.numerator), math.isqrt(q.denominator)
        if num * num == q.numerator and den * den == q.denominator:
            return Fraction(num, den)
    return math.sqrt(float(q))


def close(a, b, tol: float = 0.0) -> bool:
    if tol == 0:
        return a == b
    return abs(a - b) <= tol


def mod(x, length):
    r = x % length
    return r


def fmt17(x) -> str:
    """Fixed 17-significant-digit rendering used by every report."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def safe_exp(log_value: float) -> float:
    """exp() that saturates to inf/0 instead of raising."""
    if log_value > 709.0:
        return math.inf
    if log_value < -745.0:
        return 0.0
    return math.exp(log_value)
