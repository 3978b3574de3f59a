"""JSON format shared by every artifact.

A correlation is written as::

    {"n": 3, "m": 2, "mode": "rational", "entries": [["1/2", ...], ...]}

with ``m*m`` rows (row ``m*yA + yB``) of ``n*n`` values (column ``n*xA + xB``). Rationals are
``"a/b"`` strings, floats are JSON numbers.
"""
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from syncorr.core.errors import ParseError
from syncorr.core.types import GameShape, ScalarMode
from syncorr.core.utils import format_rational
from syncorr.correlation.correlation import Correlation, validate_stochastic


class ScalarJSONEncoder(json.JSONEncoder):
    def default(self, o):
        if isinstance(o, Fraction):
            return format_rational(o)
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, (complex, np.complexfloating)):
            return [float(o.real), float(o.imag)]
        return super(ScalarJSONEncoder, self).default(o)


def dumps(data: Any) -> str:
    return json.dumps(data, cls=ScalarJSONEncoder, indent=2) + "\n"


def correlation_to_dict(p: Correlation) -> Dict[str, Any]:
    if p.mode is ScalarMode.RATIONAL:
        rows = [[format_rational(v) for v in row] for row in p.entries]
    else:
        rows = [[float(v) for v in row] for row in p.entries]
    return {"n": p.shape.n, "m": p.shape.m, "mode": p.mode.value, "entries": rows}


def _size(data: Dict[str, Any], key: str) -> int:
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"'{key}' must be an integer, got {value!r}")
    if isinstance(value, float) and not value.is_integer():
        raise ParseError(f"'{key}' must be an integer, got {value!r}")
    return int(value)


def correlation_from_dict(data: Dict[str, Any], tol: Optional[float] = None) -> Correlation:
    try:
        shape = GameShape(_size(data, "n"), _size(data, "m"))
        mode = ScalarMode(data.get("mode", "rational"))
        entries = data["entries"]
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"Malformed correlation document: {e}")
    if not isinstance(entries, list) or not all(isinstance(row, list) for row in entries):
        raise ParseError(f"'entries' must be a list of rows, got {type(entries).__name__}")
    for row in entries:
        for value in row:
            if value is None or isinstance(value, bool):
                raise ParseError(f"Entries must be numbers or 'a/b' strings, got {value!r}")
            if mode is ScalarMode.RATIONAL and not isinstance(value, (str, int)):
                raise ParseError(f"Rational entries must be 'a/b' strings, got {value!r}")
    return validate_stochastic(entries, shape, tol=tol, mode=mode)


def correlation_dumps(p: Correlation) -> str:
    return dumps(correlation_to_dict(p))


def correlation_loads(text: str, tol: Optional[float] = None) -> Correlation:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"Invalid JSON: {e}")
    return correlation_from_dict(data, tol=tol)


def load_correlation(path: Union[str, Path], tol: Optional[float] = None) -> Correlation:
    with Path(path).open(mode="r") as json_f:
        return correlation_loads(json_f.read(), tol=tol)


def dump_correlation(p: Correlation, path: Union[str, Path]) -> None:
    with Path(path).open(mode="w") as json_f:
        json_f.write(correlation_dumps(p))
