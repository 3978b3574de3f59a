import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional

import numpy as np
from scipy.optimize import linprog

from syncorr.classical.functions import (
    FunctionDistribution,
    FunctionStrategy,
    correlation_from_distribution,
    enumerate_functions,
    function_table_matrix,
)
from syncorr.classical.simplex import RationalSimplex
from syncorr.core.config import DEFAULT_SETTINGS
from syncorr.core.errors import NotNonsignaling, NotSymmetric, NotSynchronous, ValueOutOfRange
from syncorr.core.types import GameShape, Scalar, ScalarMode
from syncorr.core.utils import format_rational, scale_to_integers
from syncorr.correlation.correlation import (
    Correlation,
    distance,
    is_nonsignaling,
    is_symmetric,
    is_synchronous,
)

logger = logging.getLogger(__name__)


class Verdict(Enum):
    CLASSICAL = "classical"
    NOT_CLASSICAL = "not-classical"


@dataclass(frozen=True, eq=False)
class SeparatingFunctional:
    """``sum(coefficients * q) <= bound`` for every classical q, violated on the input."""

    shape: GameShape
    coefficients: np.ndarray
    bound: Scalar

    def evaluate(self, p: Correlation) -> Scalar:
        return (self.coefficients * p.entries).sum()

    def to_dict(self) -> Dict[str, Any]:
        def fmt(v):
            return format_rational(v) if isinstance(v, Fraction) else float(v)

        return {
            "coefficients": [[fmt(v) for v in row] for row in self.coefficients],
            "bound": fmt(self.bound),
        }


@dataclass(frozen=True, eq=False)
class ClassicalCertificate:
    verdict: Verdict
    distribution: Optional[FunctionDistribution] = None
    functional: Optional[SeparatingFunctional] = None
    violation: Optional[Scalar] = None
    residual: float = 0.0

    @property
    def classical(self) -> bool:
        return self.verdict is Verdict.CLASSICAL

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"verdict": self.verdict.value}
        if self.distribution is not None:
            data["distribution"] = self.distribution.to_dict()
        if self.functional is not None:
            data["functional"] = self.functional.to_dict()
            v = self.violation
            data["violation"] = format_rational(v) if isinstance(v, Fraction) else float(v)
        return data


def classical_membership(
    p: Correlation, tol: Optional[float] = None, cap: Optional[int] = None
) -> ClassicalCertificate:
    """Decide whether a synchronous ``p`` is a mixture of deterministic function strategies.

    Solves ``sum_f mu(f) C_f = p, mu >= 0, sum mu = 1``. Rational inputs are decided exactly;
    the Farkas witness of an infeasible system becomes an integer separating functional.
    """
    tol = DEFAULT_SETTINGS.tol if tol is None else tol
    check = is_synchronous(p, tol)
    if not check:
        raise NotSynchronous(check.offenders, check.max_deviation)
    functions = enumerate_functions(p.shape, cap)
    if p.mode is ScalarMode.RATIONAL:
        return _exact_membership(p, functions)
    return _float_membership(p, functions, tol)


def _exact_membership(p: Correlation, functions: List[FunctionStrategy]) -> ClassicalCertificate:
    tables = function_table_matrix(functions, ScalarMode.RATIONAL)
    matrix = [list(row) for row in tables] + [[Fraction(1)] * len(functions)]
    rhs = list(p.entries.reshape(-1)) + [Fraction(1)]
    result = RationalSimplex(matrix, rhs).solve()
    logger.debug(
        f"exact membership {p.shape.label}: feasible={result.feasible} pivots={result.pivots}"
    )
    if result.feasible:
        weights = {f: w for f, w in zip(functions, result.x) if w != 0}
        mu = FunctionDistribution(p.shape, weights, ScalarMode.RATIONAL)
        if not correlation_from_distribution(mu).same_as(p):
            raise RuntimeError("Simplex solution does not reproduce the correlation")
        return ClassicalCertificate(Verdict.CLASSICAL, distribution=mu)

    integers, _ = scale_to_integers(result.dual)
    h = [Fraction(v) for v in integers[:-1]]
    t = Fraction(integers[-1])
    coefficients = np.empty((p.shape.rows, p.shape.columns), dtype=object)
    for k, v in enumerate(h):
        coefficients[divmod(k, p.shape.columns)] = v
    functional = SeparatingFunctional(p.shape, coefficients, -t)
    violation = functional.evaluate(p) - functional.bound
    if violation <= 0:
        raise RuntimeError("Farkas witness does not separate the correlation")
    return ClassicalCertificate(Verdict.NOT_CLASSICAL, functional=functional, violation=violation)


def _float_membership(
    p: Correlation, functions: List[FunctionStrategy], tol: float
) -> ClassicalCertificate:
    tables = function_table_matrix(functions, ScalarMode.FLOAT)
    k, count = tables.shape
    target = p.entries.reshape(-1)

    # Least-L1 reproduction: C mu + s_plus - s_minus = p, sum mu = 1.
    c = np.concatenate([np.zeros(count), np.ones(2 * k)])
    a_eq = np.block(
        [
            [tables, np.eye(k), -np.eye(k)],
            [np.ones((1, count)), np.zeros((1, 2 * k))],
        ]
    )
    b_eq = np.concatenate([target, [1.0]])
    primal = linprog(c, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if primal.status != 0:
        raise RuntimeError(f"Reproduction LP failed: {primal.message}")
    mu_values = primal.x[:count]
    residual = float(np.max(np.abs(tables @ mu_values - target)))
    logger.debug(f"float membership {p.shape.label}: residual={residual:.3e}")
    if residual <= tol:
        mu_values = np.clip(mu_values, 0.0, None)
        mu_values = mu_values / mu_values.sum()
        weights = {f: float(w) for f, w in zip(functions, mu_values) if w > 0}
        mu = FunctionDistribution(p.shape, weights, ScalarMode.FLOAT)
        return ClassicalCertificate(Verdict.CLASSICAL, distribution=mu, residual=residual)

    # Dual: maximize h.p + t subject to h.C_f + t <= 0 and |h| <= 1.
    c = -np.concatenate([target, [1.0]])
    a_ub = np.hstack([tables.T, np.ones((count, 1))])
    bounds = [(-1.0, 1.0)] * k + [(None, None)]
    dual = linprog(c, A_ub=a_ub, b_ub=np.zeros(count), bounds=bounds, method="highs")
    if dual.status != 0:
        raise RuntimeError(f"Separation LP failed: {dual.message}")
    h = dual.x[:k].reshape(p.shape.rows, p.shape.columns)
    functional = SeparatingFunctional(p.shape, h, float(-dual.x[-1]))
    violation = float(functional.evaluate(p) - functional.bound)
    if violation <= tol:
        raise RuntimeError(
            f"Inconclusive membership: residual {residual:.3e} but separation only {violation:.3e}"
        )
    return ClassicalCertificate(
        Verdict.NOT_CLASSICAL, functional=functional, violation=violation, residual=residual
    )


def two_input_decompose(p: Correlation, tol: Optional[float] = None) -> FunctionDistribution:
    """For n = 2: mu(f) = u(f(0), f(1)) with u(yA, yB) = p(yA, yB | 0, 1)."""
    tol = DEFAULT_SETTINGS.tol if tol is None else tol
    if p.shape.n != 2:
        raise ValueOutOfRange(f"Two-input decomposition needs n = 2, got n = {p.shape.n}")
    check = is_synchronous(p, tol)
    if not check:
        raise NotSynchronous(check.offenders, check.max_deviation)
    if not is_nonsignaling(p, tol):
        raise NotNonsignaling("Two-input decomposition needs a nonsignaling correlation")
    if not is_symmetric(p, tol):
        raise NotSymmetric("Two-input decomposition needs a symmetric correlation")
    weights = {}
    for f in enumerate_functions(p.shape):
        w = p.prob(f(0), f(1), 0, 1)
        if w != 0:
            weights[f] = w
    mu = FunctionDistribution(p.shape, weights, p.mode)
    if distance(correlation_from_distribution(mu), p) > tol:
        raise RuntimeError("Two-input decomposition does not reproduce the correlation")
    return mu
