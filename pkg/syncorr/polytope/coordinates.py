import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional, Sequence, Tuple

import numpy as np

from syncorr.core.config import DEFAULT_SETTINGS
from syncorr.core.errors import ConditionViolated, DimensionMismatch, MarginalMismatch, ShapeMismatch
from syncorr.core.types import GameShape, Scalar, ScalarMode
from syncorr.core.utils import format_rational, infer_mode, is_equal, one, scalar_array
from syncorr.correlation.correlation import Correlation, validate_stochastic


@dataclass(frozen=True, eq=False)
class WCoordinates:
    """``values[n*xA + xB] = p(1, 1 | xA, xB)`` for a two-output correlation."""

    n: int
    mode: ScalarMode
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.n * self.n,):
            raise DimensionMismatch((self.n * self.n,), self.values.shape)
        self.values.setflags(write=False)

    @classmethod
    def of(cls, values: Sequence[Any], mode: Optional[ScalarMode] = None) -> "WCoordinates":
        if mode is None:
            mode = infer_mode(values)
        n = math.isqrt(len(values))
        if n * n != len(values):
            raise DimensionMismatch((n * n,), (len(values),))
        return cls(n, mode, scalar_array(list(values), mode))

    def __getitem__(self, k: int) -> Scalar:
        return self.values[k]

    def __len__(self):
        return len(self.values)

    def at(self, x_a: int, x_b: int) -> Scalar:
        return self.values[self.n * x_a + x_b]

    def as_tuple(self) -> Tuple[Scalar, ...]:
        return tuple(self.values)

    def to_list(self):
        if self.mode is ScalarMode.RATIONAL:
            return [format_rational(v) for v in self.values]
        return [float(v) for v in self.values]


def w_coordinates(p: Correlation) -> WCoordinates:
    if p.shape.m != 2:
        raise ShapeMismatch(f"w-coordinates need two outputs, got shape {p.shape.label}")
    row = p.entries[p.shape.row_index(1, 1)]
    return WCoordinates(p.shape.n, p.mode, row.copy())


def correlation_from_w(w: WCoordinates, tol: Optional[float] = None) -> Correlation:
    """Rebuild the synchronous nonsignaling correlation with the given ``p(1, 1 | ., .)``.

    ``ConditionViolated.which`` is 0 for a negative coordinate, 1 for
    ``w(xA, xB) > w(xA, xA)``, 2 for ``w(xA, xB) > w(xB, xB)`` and 3 for
    ``w(xA, xA) + w(xB, xB) > 1 + w(xA, xB)``.
    """
    tol = DEFAULT_SETTINGS.tol if tol is None else tol
    slack = 0 if w.mode is ScalarMode.RATIONAL else tol
    n = w.n
    for x_a in range(n):
        for x_b in range(n):
            value = w.at(x_a, x_b)
            if value < -slack:
                raise ConditionViolated(0, (x_a, x_b))
            if value > w.at(x_a, x_a) + slack:
                raise ConditionViolated(1, (x_a, x_b))
            if value > w.at(x_b, x_b) + slack:
                raise ConditionViolated(2, (x_a, x_b))
            if w.at(x_a, x_a) + w.at(x_b, x_b) > one(w.mode) + value + slack:
                raise ConditionViolated(3, (x_a, x_b))

    shape = GameShape(n, 2)
    table = np.empty((shape.rows, shape.columns), dtype=object)
    for x_a in range(n):
        for x_b in range(n):
            c = shape.column_index(x_a, x_b)
            value, diag_a, diag_b = w.at(x_a, x_b), w.at(x_a, x_a), w.at(x_b, x_b)
            table[shape.row_index(0, 0), c] = one(w.mode) + value - diag_a - diag_b
            table[shape.row_index(0, 1), c] = diag_b - value
            table[shape.row_index(1, 0), c] = diag_a - value
            table[shape.row_index(1, 1), c] = value
    return validate_stochastic(table, shape, tol=tol, mode=w.mode)


@dataclass(frozen=True, eq=False)
class TwoPointDomainData:
    """``u = p(. , . | 0, 1)`` and ``v = p(. , . | 1, 0)`` with their marginals.

    ``theta[y]`` is the row sum of ``u`` and must equal the column sum of ``v``; ``phi[y]``
    is the column sum of ``u`` and must equal the row sum of ``v``.
    """

    m: int
    mode: ScalarMode
    u: np.ndarray
    v: np.ndarray
    theta: np.ndarray
    phi: np.ndarray

    @classmethod
    def build(cls, u: Any, v: Any = None, tol: Optional[float] = None) -> "TwoPointDomainData":
        tol = DEFAULT_SETTINGS.tol if tol is None else tol
        raw_u = np.asarray(u, dtype=object)
        raw_v = raw_u.T if v is None else np.asarray(v, dtype=object)
        mode = infer_mode(list(raw_u.flat) + list(raw_v.flat))
        u = scalar_array(raw_u, mode)
        v = scalar_array(raw_v, mode)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise DimensionMismatch((u.shape[0], u.shape[0]), u.shape)
        if v.shape != u.shape:
            raise DimensionMismatch(u.shape, v.shape)
        for table in (u, v):
            if not is_equal(table.sum(), one(mode), mode, tol) or (table < 0).any():
                raise ValueError("u and v must be probability tables on Y x Y")
        theta = u.sum(axis=1)
        phi = u.sum(axis=0)
        v_columns = v.sum(axis=0)
        v_rows = v.sum(axis=1)
        m = u.shape[0]
        for y in range(m):
            if not is_equal(theta[y], v_columns[y], mode, tol):
                raise MarginalMismatch(1, y)
            if not is_equal(phi[y], v_rows[y], mode, tol):
                raise MarginalMismatch(2, y)
        return cls(m, mode, u, v, theta, phi)

    @property
    def symmetric(self) -> bool:
        return bool(np.all(self.v == self.u.T))


def two_point_nonsignaling(data: TwoPointDomainData, tol: Optional[float] = None) -> Correlation:
    m = data.m
    shape = GameShape(2, m)
    t = np.empty((m, m, 2, 2), dtype=object)
    for y_a in range(m):
        for y_b in range(m):
            same = y_a == y_b
            t[y_a, y_b, 0, 0] = data.theta[y_a] if same else 0 * data.theta[y_a]
            t[y_a, y_b, 0, 1] = data.u[y_a, y_b]
            t[y_a, y_b, 1, 0] = data.v[y_a, y_b]
            t[y_a, y_b, 1, 1] = data.phi[y_a] if same else 0 * data.phi[y_a]
    return validate_stochastic(t.reshape(shape.rows, shape.columns), shape, tol=tol, mode=data.mode)


def two_point_classical(u: Any, tol: Optional[float] = None) -> Correlation:
    """``v`` is forced to the transpose of ``u``."""
    return two_point_nonsignaling(TwoPointDomainData.build(u, None, tol), tol)


def random_two_point_data(
    rng: np.random.Generator, m: int, symmetric: bool, resolution: int = 12
) -> TwoPointDomainData:
    """Rational ``u`` with full support; ``v`` is its transpose or a perturbation of it.

    The perturbation adds ``t`` times a ``(+1, -1; -1, +1)`` pattern on a 2 x 2 minor, which
    keeps all row and column sums, so the marginal conditions still hold while ``v != u^T``.
    """
    if m < 2 and not symmetric:
        raise ValueError("An asymmetric two-point construction needs at least two outputs")
    weights = rng.integers(1, resolution + 1, size=(m, m))
    total = int(weights.sum())
    u = [[Fraction(int(w), total) for w in row] for row in weights]
    v = [[u[b][a] for b in range(m)] for a in range(m)]
    if not symmetric:
        i, j = (int(k) for k in rng.choice(m, size=2, replace=False))
        k, l = (int(k) for k in rng.choice(m, size=2, replace=False))
        room = min(v[i][l], v[j][k])
        t = room / int(rng.integers(1, 5))
        v[i][k] += t
        v[i][l] -= t
        v[j][k] -= t
        v[j][l] += t
    return TwoPointDomainData.build(u, v)
