"""Exact linear algebra over ``Fraction`` rows."""
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from syncorr.core.errors import Infeasible

Row = List[Fraction]


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), 0)


def rref(rows: Sequence[Sequence], width: Optional[int] = None) -> Tuple[List[Row], List[int]]:
    """Reduced row echelon form. Returns the nonzero rows and their pivot columns."""
    matrix = [[Fraction(v) for v in row] for row in rows]
    if width is None:
        width = len(matrix[0]) if matrix else 0
    pivots: List[int] = []
    r = 0
    for c in range(width):
        if r == len(matrix):
            break
        pivot = next((i for i in range(r, len(matrix)) if matrix[i][c] != 0), None)
        if pivot is None:
            continue
        matrix[r], matrix[pivot] = matrix[pivot], matrix[r]
        head = matrix[r][c]
        matrix[r] = [v / head for v in matrix[r]]
        for i in range(len(matrix)):
            if i != r and matrix[i][c] != 0:
                factor = matrix[i][c]
                matrix[i] = [a - factor * b for a, b in zip(matrix[i], matrix[r])]
        pivots.append(c)
        r += 1
    return matrix[:r], pivots


def exact_rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], width: int) -> List[Row]:
    """Basis of ``{x : row . x = 0 for every row}``, one vector per free column."""
    reduced, pivots = rref(rows, width) if rows else ([], [])
    basis = []
    for free in (c for c in range(width) if c not in pivots):
        vector = [Fraction(0)] * width
        vector[free] = Fraction(1)
        for row, pivot in zip(reduced, pivots):
            vector[pivot] = -row[free]
        basis.append(vector)
    return basis


def affine_parametrization(
    equations: Sequence[Tuple[Sequence, Fraction]], dim: int
) -> Tuple[Row, List[Row]]:
    """Solutions of ``c . x = e`` as ``origin + sum_k z_k directions[k]``.

    Raises ``Infeasible`` when the equations are inconsistent.
    """
    if not equations:
        identity = [[Fraction(int(i == j)) for i in range(dim)] for j in range(dim)]
        return [Fraction(0)] * dim, identity
    augmented = [list(c) + [e] for c, e in equations]
    reduced, pivots = rref(augmented, dim + 1)
    if dim in pivots:
        raise Infeasible("Equations are inconsistent")
    origin = [Fraction(0)] * dim
    for row, pivot in zip(reduced, pivots):
        origin[pivot] = row[dim]
    directions = nullspace([row[:dim] for row in reduced], dim)
    return origin, directions


def invert(matrix: Sequence[Sequence]) -> List[Row]:
    size = len(matrix)
    augmented = [
        [Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(size)]
        for i, row in enumerate(matrix)
    ]
    reduced, pivots = rref(augmented, size)
    if pivots != list(range(size)):
        raise ValueError("Matrix is singular")
    return [row[size:] for row in reduced]
