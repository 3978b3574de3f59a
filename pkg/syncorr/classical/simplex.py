import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence


@dataclass
class FeasibilityResult:
    """Outcome of phase one on ``A x = b, x >= 0``.

    When feasible, ``x`` is a basic feasible solution. Otherwise ``dual`` is a Farkas
    witness ``y`` with ``y.A_j <= 0`` for every column and ``y.b = infeasibility > 0``.
    """

    feasible: bool
    x: Optional[List[Fraction]]
    dual: List[Fraction]
    infeasibility: Fraction
    pivots: int


class RationalSimplex:
    """Exact phase-one simplex on a dense ``Fraction`` tableau with Bland's rule."""

    logger = logging.getLogger("RationalSimplex")

    def __init__(self, matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]):
        self.rows = len(matrix)
        if self.rows != len(rhs):
            raise ValueError(f"Matrix has {self.rows} rows but rhs has {len(rhs)}")
        self.columns = len(matrix[0]) if self.rows else 0
        # Rows with negative rhs are negated; the dual sign is restored on exit.
        self.signs = [(-1 if Fraction(b) < 0 else 1) for b in rhs]
        width = self.columns + self.rows
        self.tableau: List[List[Fraction]] = []
        for i in range(self.rows):
            sign = self.signs[i]
            row = [sign * Fraction(a) for a in matrix[i]]
            row += [Fraction(1) if k == i else Fraction(0) for k in range(self.rows)]
            row.append(sign * Fraction(rhs[i]))
            self.tableau.append(row)
        self.basis = [self.columns + i for i in range(self.rows)]
        # Phase-one cost: 1 on every artificial column.
        self.cost = [Fraction(0)] * self.columns + [Fraction(1)] * self.rows
        self.reduced = list(self.cost) + [Fraction(0)]
        for row in self.tableau:
            for j in range(width + 1):
                self.reduced[j] -= row[j]

    def _entering(self) -> Optional[int]:
        for j in range(self.columns + self.rows):
            if self.reduced[j] < 0:
                return j
        return None

    def _leaving(self, entering: int) -> Optional[int]:
        best = None
        best_ratio = None
        for i, row in enumerate(self.tableau):
            if row[entering] > 0:
                ratio = row[-1] / row[entering]
                if (
                    best is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and self.basis[i] < self.basis[best])
                ):
                    best = i
                    best_ratio = ratio
        return best

    def _pivot(self, r: int, c: int):
        pivot_row = self.tableau[r]
        pivot = pivot_row[c]
        pivot_row[:] = [v / pivot for v in pivot_row]
        for i, row in enumerate(self.tableau):
            if i != r and row[c] != 0:
                factor = row[c]
                row[:] = [a - factor * b for a, b in zip(row, pivot_row)]
        if self.reduced[c] != 0:
            factor = self.reduced[c]
            self.reduced = [a - factor * b for a, b in zip(self.reduced, pivot_row)]
        self.basis[r] = c

    def solve(self) -> FeasibilityResult:
        pivots = 0
        while True:
            entering = self._entering()
            if entering is None:
                break
            leaving = self._leaving(entering)
            if leaving is None:
                raise RuntimeError("Phase-one objective is bounded below; unbounded ray is impossible")
            self._pivot(leaving, entering)
            pivots += 1
        self.logger.debug(f"solve: {self.rows}x{self.columns} tableau optimal after {pivots} pivots")

        infeasibility = sum(
            (self.tableau[i][-1] for i in range(self.rows) if self.basis[i] >= self.columns),
            Fraction(0),
        )
        # Reduced cost of artificial column i is 1 - y_i.
        dual = [
            self.signs[i] * (Fraction(1) - self.reduced[self.columns + i]) for i in range(self.rows)
        ]
        if infeasibility == 0:
            x = [Fraction(0)] * self.columns
            for i, j in enumerate(self.basis):
                if j < self.columns:
                    x[j] = self.tableau[i][-1]
            return FeasibilityResult(True, x, dual, infeasibility, pivots)
        return FeasibilityResult(False, None, dual, infeasibility, pivots)
