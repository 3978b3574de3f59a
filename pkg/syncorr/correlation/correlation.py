import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np

from syncorr.core.config import DEFAULT_SETTINGS
from syncorr.core.errors import (
    ColumnSumViolation,
    DimensionMismatch,
    ModeMismatch,
    NegativeEntry,
    ShapeMismatch,
    ValueOutOfRange,
    WeightSumViolation,
)
from syncorr.core.types import GameShape, Scalar, ScalarMode, Side
from syncorr.core.utils import (
    coerce,
    infer_mode,
    is_equal,
    is_zero,
    max_abs,
    one,
    scalar_array,
    zero,
    zeros,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Correlation:
    """The table p(yA, yB | xA, xB) as an m² x n² column-stochastic array.

    Row ``m*yA + yB``, column ``n*xA + xB``. Entries are ``Fraction`` objects in rational
    mode and ``float64`` in float mode. The array is read-only.
    """

    shape: GameShape
    mode: ScalarMode
    entries: np.ndarray
    lossy: bool = False

    def __post_init__(self):
        self.entries.setflags(write=False)

    def prob(self, y_a: int, y_b: int, x_a: int, x_b: int) -> Scalar:
        return self.entries[self.shape.row_index(y_a, y_b), self.shape.column_index(x_a, x_b)]

    def column(self, x_a: int, x_b: int) -> np.ndarray:
        return self.entries[:, self.shape.column_index(x_a, x_b)]

    def tensor(self) -> np.ndarray:
        """View indexed as ``[yA, yB, xA, xB]``."""
        m, n = self.shape.m, self.shape.n
        return self.entries.reshape(m, m, n, n)

    def to_float(self) -> "Correlation":
        if self.mode is ScalarMode.FLOAT:
            return self
        return Correlation(
            self.shape, ScalarMode.FLOAT, self.entries.astype(np.float64), lossy=True
        )

    def same_as(self, other: "Correlation", tol: float = 0.0) -> bool:
        if self.shape != other.shape:
            return False
        if self.mode is ScalarMode.RATIONAL and other.mode is ScalarMode.RATIONAL:
            return bool(np.all(self.entries == other.entries))
        return distance(self, other) <= tol

    def __repr__(self):
        return f"Correlation(shape={self.shape.label}, mode={self.mode.value})"


@dataclass(frozen=True, eq=False)
class Marginal:
    """Values indexed ``[y, x]``; each column sums to one."""

    side: Side
    values: np.ndarray


@dataclass(frozen=True)
class SynchronousCheck:
    synchronous: bool
    offenders: List[Tuple[int, int, int]] = field(default_factory=list)
    max_deviation: float = 0.0

    def __bool__(self):
        return self.synchronous


@dataclass(frozen=True)
class NonsignalingCheck:
    nonsignaling: bool
    marginal_a: Optional[Marginal] = None
    marginal_b: Optional[Marginal] = None
    max_deviation: float = 0.0

    def __bool__(self):
        return self.nonsignaling


def _tol(tol: Optional[float]) -> float:
    return DEFAULT_SETTINGS.tol if tol is None else tol


def validate_stochastic(
    table: Any,
    shape: GameShape,
    tol: Optional[float] = None,
    mode: Optional[ScalarMode] = None,
) -> Correlation:
    """Check nonnegativity and unit column sums, returning a ``Correlation``.

    Rational mode is exact. Float mode tolerates ``tol`` on both checks, clips tiny
    negatives to zero and renormalizes every column.
    """
    tol = _tol(tol)
    raw = np.asarray(table, dtype=object)
    expected = (shape.rows, shape.columns)
    if raw.shape != expected:
        raise DimensionMismatch(expected, raw.shape)
    if mode is None:
        mode = infer_mode(raw.flat)
    entries = scalar_array(raw, mode)

    for (row, column), value in np.ndenumerate(entries):
        if value < 0 and not (mode is ScalarMode.FLOAT and value >= -tol):
            y_a, y_b = divmod(row, shape.m)
            x_a, x_b = divmod(column, shape.n)
            raise NegativeEntry((y_a, y_b, x_a, x_b), value)

    sums = entries.sum(axis=0)
    for column in range(shape.columns):
        deviation = sums[column] - one(mode)
        if not is_zero(deviation, mode, tol):
            raise ColumnSumViolation(column, deviation)

    if mode is ScalarMode.FLOAT:
        entries = np.clip(entries, 0.0, None)
        entries = entries / entries.sum(axis=0, keepdims=True)
    return Correlation(shape, mode, entries)


def is_synchronous(p: Correlation, tol: Optional[float] = None) -> SynchronousCheck:
    tol = _tol(tol)
    t = p.tensor()
    offenders = []
    deviation = 0.0
    for x in range(p.shape.n):
        for y_a in range(p.shape.m):
            for y_b in range(p.shape.m):
                if y_a == y_b:
                    continue
                value = t[y_a, y_b, x, x]
                deviation = max(deviation, abs(float(value)))
                if not is_zero(value, p.mode, tol):
                    offenders.append((x, y_a, y_b))
    return SynchronousCheck(not offenders, offenders, deviation)


def is_nonsignaling(p: Correlation, tol: Optional[float] = None) -> NonsignalingCheck:
    """Both players' output marginals must not depend on the other player's input."""
    tol = _tol(tol)
    t = p.tensor()
    # [yA, xA, xB] and [yB, xA, xB]
    sums_a = t.sum(axis=1)
    sums_b = t.sum(axis=0)
    dev_a = sums_a - sums_a[:, :, :1]
    dev_b = sums_b - sums_b[:, :1, :]
    deviation = max(max_abs(dev_a), max_abs(dev_b))
    if p.mode is ScalarMode.RATIONAL:
        ok = bool(np.all(dev_a == 0) and np.all(dev_b == 0))
    else:
        ok = deviation <= tol
    if not ok:
        return NonsignalingCheck(False, max_deviation=deviation)
    marginal_a = Marginal(Side.A, sums_a[:, :, 0].copy())
    marginal_b = Marginal(Side.B, sums_b[:, 0, :].copy())
    return NonsignalingCheck(True, marginal_a, marginal_b, deviation)


def is_symmetric(p: Correlation, tol: Optional[float] = None) -> bool:
    tol = _tol(tol)
    t = p.tensor()
    swapped = t.transpose(1, 0, 3, 2)
    if p.mode is ScalarMode.RATIONAL:
        return bool(np.all(t == swapped))
    return max_abs(t - swapped) <= tol


def from_function(
    f: Sequence[int], shape: GameShape, mode: ScalarMode = ScalarMode.RATIONAL
) -> Correlation:
    """The deterministic strategy in which both players apply ``f``."""
    f = tuple(int(v) for v in f)
    if len(f) != shape.n:
        raise DimensionMismatch((shape.n,), (len(f),))
    for x, value in enumerate(f):
        if not 0 <= value < shape.m:
            raise ValueOutOfRange(f"f({x}) = {value} is outside 0..{shape.m - 1}")
    m, n = shape.m, shape.n
    t = zeros((m, m, n, n), mode)
    for x_a in range(n):
        for x_b in range(n):
            t[f[x_a], f[x_b], x_a, x_b] = one(mode)
    return Correlation(shape, mode, t.reshape(shape.rows, shape.columns))


def convex_combine(
    terms: Sequence[Tuple[Any, Correlation]], tol: Optional[float] = None
) -> Correlation:
    tol = _tol(tol)
    if not terms:
        raise WeightSumViolation(0)
    shape = terms[0][1].shape
    mode = terms[0][1].mode
    for _, p in terms:
        if p.shape != shape:
            raise ShapeMismatch(f"Cannot mix shapes {shape.label} and {p.shape.label}")
        if p.mode is not mode:
            raise ModeMismatch(f"Cannot mix {mode.value} and {p.mode.value} correlations")

    weights = [coerce(w, mode) for w, _ in terms]
    if any(w < 0 for w in weights):
        raise WeightSumViolation(sum(weights, zero(mode)))
    total = sum(weights, zero(mode))
    if not is_equal(total, one(mode), mode, tol):
        raise WeightSumViolation(total)

    entries = zeros((shape.rows, shape.columns), mode)
    for w, (_, p) in zip(weights, terms):
        if w != 0:
            entries = entries + w * p.entries
    lossy = any(p.lossy for _, p in terms)
    return Correlation(shape, mode, entries, lossy=lossy)


def distance(p: Correlation, q: Correlation) -> float:
    """Largest entrywise difference, as a float."""
    if p.shape != q.shape:
        raise ShapeMismatch(f"Cannot compare shapes {p.shape.label} and {q.shape.label}")
    return max_abs(p.entries.astype(np.float64) - q.entries.astype(np.float64))


def uniform(shape: GameShape, mode: ScalarMode = ScalarMode.RATIONAL) -> Correlation:
    value = Fraction(1, shape.rows) if mode is ScalarMode.RATIONAL else 1.0 / shape.rows
    entries = np.full((shape.rows, shape.columns), value, dtype=object)
    if mode is ScalarMode.FLOAT:
        entries = entries.astype(np.float64)
    return Correlation(shape, mode, entries)
