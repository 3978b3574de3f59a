import importlib.resources as pkg_resources
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional

from syncorr.core.types import BellFunctional, GameShape, ScalarMode
from syncorr.core.utils import parse_rational
from syncorr.correlation.correlation import Correlation, validate_stochastic
from syncorr.search import data
from syncorr.search.bloch import BlochAngles, SumDiffAngles

saturators_cache: Optional[dict] = None


def _saturators_json() -> dict:
    global saturators_cache

    if saturators_cache is None:
        with pkg_resources.path(data, "saturators.json") as p:
            with p.open(mode="r") as json_file:
                saturators_cache = json.load(json_file)
    return saturators_cache


def _radians(multiple_of_pi: str) -> float:
    return float(parse_rational(multiple_of_pi)) * math.pi


@dataclass(frozen=True)
class Saturator:
    """A correlation reaching ``-1/8`` on one Bell functional, with qubit angles producing it."""

    functional: BellFunctional
    matrix: Correlation
    angles: BlochAngles


def reference_saturators() -> Dict[BellFunctional, Saturator]:
    result = {}
    shape = GameShape(3, 2)
    for label, entry in _saturators_json().items():
        functional = BellFunctional.from_label(label)
        table = [[Fraction(v, 8) for v in row] for row in entry["eighths"]]
        angles = {key: _radians(value) for key, value in entry["angles"].items()}
        result[functional] = Saturator(
            functional,
            validate_stochastic(table, shape, mode=ScalarMode.RATIONAL),
            BlochAngles(**angles),
        )
    return result


def known_j0_argmins() -> List[SumDiffAngles]:
    """The eight (rho, sigma, delta) minimizers of ``1 - J0``, canonicalized to [0, 2 pi)."""
    argmins = _saturators_json()["J0"]["argmins"]
    points = [SumDiffAngles(*(_radians(v) for v in point)).canonical() for point in argmins]
    return sorted(points, key=SumDiffAngles.as_tuple)
