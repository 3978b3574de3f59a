import math
import numbers
import re
from fractions import Fraction
from functools import reduce
from typing import Any, Iterable, List, Sequence, Tuple

import numpy as np

from syncorr.core.errors import ModeMismatch, ParseError
from syncorr.core.types import GameShape, Scalar, ScalarMode

RATIONAL_PATTERN = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")
GAME_PATTERN = re.compile(r"^\s*(\d+)\s*[xX]\s*(\d+)\s*$")


def parse_rational(text: str) -> Fraction:
    match = RATIONAL_PATTERN.match(text)
    if match is None:
        raise ParseError(f"Not a rational literal: {text!r}")
    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) else 1
    if denominator == 0:
        raise ParseError(f"Zero denominator in {text!r}")
    return Fraction(numerator, denominator)


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_game(label: str) -> GameShape:
    """Convert a label like ``3x2`` into ``GameShape(n=3, m=2)``."""
    match = GAME_PATTERN.match(label)
    if match is None:
        raise ParseError(f"Not a game label: {label!r}")
    return GameShape(int(match.group(1)), int(match.group(2)))


def is_float_like(value: Any) -> bool:
    return isinstance(value, (float, np.floating))


def as_fraction(value: Any) -> Fraction:
    """Exact conversion to ``Fraction``. Floats are refused, never rounded."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, bool):
        raise ParseError(f"Booleans are not scalars: {value!r}")
    if isinstance(value, (numbers.Integral, np.integer)):
        return Fraction(int(value))
    if is_float_like(value):
        raise ModeMismatch(f"Refusing float -> rational conversion of {value!r}")
    raise ParseError(f"Unsupported scalar {value!r}")


def infer_mode(values: Iterable[Any]) -> ScalarMode:
    floats = [is_float_like(v) for v in values]
    if any(floats):
        return ScalarMode.FLOAT
    return ScalarMode.RATIONAL


def coerce(value: Any, mode: ScalarMode) -> Scalar:
    if mode is ScalarMode.RATIONAL:
        return as_fraction(value)
    if isinstance(value, str):
        return float(parse_rational(value))
    if value is None or isinstance(value, bool):
        raise ParseError(f"Unsupported scalar {value!r}")
    try:
        return float(value)
    except (TypeError, ValueError) as e:
        raise ParseError(f"Unsupported scalar {value!r}: {e}")


def zero(mode: ScalarMode) -> Scalar:
    return Fraction(0) if mode is ScalarMode.RATIONAL else 0.0


def one(mode: ScalarMode) -> Scalar:
    return Fraction(1) if mode is ScalarMode.RATIONAL else 1.0


def is_zero(value: Scalar, mode: ScalarMode, tol: float) -> bool:
    if mode is ScalarMode.RATIONAL:
        return value == 0
    return abs(value) <= tol


def is_equal(a: Scalar, b: Scalar, mode: ScalarMode, tol: float) -> bool:
    return is_zero(a - b, mode, tol)


def scalar_array(values: Any, mode: ScalarMode) -> np.ndarray:
    """A numpy array of ``Fraction`` objects (rational mode) or ``float64``."""
    if mode is ScalarMode.RATIONAL:
        source = np.asarray(values, dtype=object)
        result = np.empty(source.shape, dtype=object)
        for index, value in np.ndenumerate(source):
            result[index] = as_fraction(value)
        return result
    source = np.asarray(values, dtype=object)
    result = np.empty(source.shape, dtype=np.float64)
    for index, value in np.ndenumerate(source):
        result[index] = coerce(value, ScalarMode.FLOAT)
    return result


def zeros(shape: Tuple[int, ...], mode: ScalarMode) -> np.ndarray:
    if mode is ScalarMode.RATIONAL:
        return np.full(shape, Fraction(0), dtype=object)
    return np.zeros(shape, dtype=np.float64)


def lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def scale_to_integers(values: Sequence[Fraction]) -> Tuple[List[int], Fraction]:
    """Multiply ``values`` by the smallest positive rational making them coprime integers.

    Returns the integers together with the factor applied.
    """
    fractions = [Fraction(v) for v in values]
    denominator = reduce(lcm, (f.denominator for f in fractions), 1)
    integers = [int(f * denominator) for f in fractions]
    divisor = reduce(math.gcd, (abs(i) for i in integers), 0)
    if divisor == 0:
        return integers, Fraction(1)
    return [i // divisor for i in integers], Fraction(denominator, divisor)


def max_abs(values: np.ndarray) -> float:
    if values.size == 0:
        return 0.0
    return float(np.max(np.abs(values.astype(np.float64))))
