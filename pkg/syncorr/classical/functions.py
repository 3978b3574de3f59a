import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from syncorr.core.config import DEFAULT_SETTINGS
from syncorr.core.errors import CapExceeded, ParseError, ValueOutOfRange, WeightSumViolation
from syncorr.core.types import GameShape, Scalar, ScalarMode
from syncorr.core.utils import coerce, format_rational, infer_mode, is_equal, one, zero
from syncorr.correlation.correlation import Correlation, convex_combine, from_function


@dataclass(frozen=True)
class FunctionStrategy:
    shape: GameShape
    values: Tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.shape.n:
            raise ValueOutOfRange(f"Expected {self.shape.n} values, got {len(self.values)}")
        for x, y in enumerate(self.values):
            if not 0 <= y < self.shape.m:
                raise ValueOutOfRange(f"f({x}) = {y} is outside 0..{self.shape.m - 1}")

    def __call__(self, x: int) -> int:
        return self.values[x]

    def correlation(self, mode: ScalarMode = ScalarMode.RATIONAL) -> Correlation:
        return from_function(self.values, self.shape, mode)


@dataclass(frozen=True, eq=False)
class FunctionDistribution:
    """A probability vector over Y^X, stored sparsely; absent functions have weight 0."""

    shape: GameShape
    weights: Mapping[FunctionStrategy, Scalar]
    mode: ScalarMode = ScalarMode.RATIONAL

    def __post_init__(self):
        total = zero(self.mode)
        for f, w in self.weights.items():
            if f.shape != self.shape:
                raise ValueOutOfRange(f"Function of shape {f.shape.label} in a {self.shape.label} distribution")
            if w < 0:
                raise WeightSumViolation(w)
            total += w
        if not is_equal(total, one(self.mode), self.mode, DEFAULT_SETTINGS.tol):
            raise WeightSumViolation(total)

    @classmethod
    def from_pairs(
        cls, shape: GameShape, pairs: Sequence[Tuple[Sequence[int], Any]], mode: Optional[ScalarMode] = None
    ) -> "FunctionDistribution":
        if mode is None:
            mode = infer_mode(w for _, w in pairs)
        weights: Dict[FunctionStrategy, Scalar] = {}
        for values, w in pairs:
            f = FunctionStrategy(shape, tuple(int(v) for v in values))
            weights[f] = weights.get(f, zero(mode)) + coerce(w, mode)
        return cls(shape, {f: w for f, w in weights.items() if w != 0}, mode)

    @classmethod
    def point_mass(cls, f: FunctionStrategy) -> "FunctionDistribution":
        return cls(f.shape, {f: Fraction(1)})

    def weight(self, f: FunctionStrategy) -> Scalar:
        return self.weights.get(f, zero(self.mode))

    def support(self) -> List[FunctionStrategy]:
        return sorted(self.weights, key=lambda f: f.values)

    def to_dict(self) -> Dict[str, Any]:
        def fmt(w):
            return format_rational(w) if self.mode is ScalarMode.RATIONAL else float(w)

        return {
            "n": self.shape.n,
            "m": self.shape.m,
            "weights": [{"f": list(f.values), "w": fmt(self.weights[f])} for f in self.support()],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FunctionDistribution":
        try:
            shape = GameShape(int(data["n"]), int(data["m"]))
            pairs = [(item["f"], item["w"]) for item in data["weights"]]
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"Malformed function distribution: {e}")
        return cls.from_pairs(shape, pairs)


def function_count(shape: GameShape) -> int:
    return shape.m**shape.n


def enumerate_functions(shape: GameShape, cap: Optional[int] = None) -> List[FunctionStrategy]:
    """All m^n functions X -> Y in lexicographic order of (f(0), ..., f(n-1))."""
    cap = DEFAULT_SETTINGS.function_cap if cap is None else cap
    count = function_count(shape)
    if count > cap:
        raise CapExceeded(count, cap)
    return [
        FunctionStrategy(shape, values)
        for values in itertools.product(range(shape.m), repeat=shape.n)
    ]


def correlation_from_distribution(mu: FunctionDistribution) -> Correlation:
    terms = [(mu.weights[f], f.correlation(mu.mode)) for f in mu.support()]
    return convex_combine(terms)


def function_table_matrix(functions: Sequence[FunctionStrategy], mode: ScalarMode) -> np.ndarray:
    """Columns are the flattened deterministic tables of ``functions``."""
    columns = [f.correlation(mode).entries.reshape(-1) for f in functions]
    return np.stack(columns, axis=1)


def random_distribution(
    rng: np.random.Generator, shape: GameShape, support: Optional[int] = None, resolution: int = 12
) -> FunctionDistribution:
    """Rational weights on ``support`` distinct functions drawn without replacement."""
    count = function_count(shape)
    support = count if support is None else min(support, count)
    indices = rng.choice(count, size=support, replace=False)
    weights = rng.integers(1, resolution + 1, size=support)
    total = int(weights.sum())
    pairs = []
    for index, w in zip(indices, weights):
        values = np.unravel_index(int(index), (shape.m,) * shape.n)
        pairs.append(([int(v) for v in values], Fraction(int(w), total)))
    return FunctionDistribution.from_pairs(shape, pairs, ScalarMode.RATIONAL)
