import itertools
import re
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from syncorr.core.errors import ParseError, ValueOutOfRange
from syncorr.core.types import GameShape, RationalVector
from syncorr.core.utils import parse_rational
from syncorr.polytope.double_description import HPolytope

CONSTRAINT_PATTERN = re.compile(r"^(.+?)(<=|>=|=)(.+)$")
TERM_PATTERN = re.compile(r"^([+-]?)(\d+(?:/\d+)?)?\*?(?:w(\d+))?$")
SIDE_PATTERN = re.compile(r"[+-]?[^+-]+")

# The 24 inequalities cutting out the synchronous nonsignaling polytope for |X| = 3, |Y| = 2,
# in coordinates w_{3 xA + xB} = p(1, 1 | xA, xB).
SYNC_NS_3_2 = (
    "0 <= w1", "0 <= w2", "0 <= w3", "0 <= w5", "0 <= w6", "0 <= w7",
    "w0 + w4 <= 1 + w1", "w0 + w4 <= 1 + w3",
    "w0 + w8 <= 1 + w2", "w0 + w8 <= 1 + w6",
    "w4 + w8 <= 1 + w5", "w4 + w8 <= 1 + w7",
    "w1 <= w0", "w2 <= w0", "w3 <= w4", "w5 <= w4", "w6 <= w8", "w7 <= w8",
    "w1 <= w4", "w7 <= w4", "w2 <= w8", "w5 <= w8", "w3 <= w0", "w6 <= w0",
)  # fmt: skip

# Hidden-variable strategies are symmetric: w(xA, xB) = w(xB, xA).
SYMMETRY_3_2 = ("w1 = w3", "w2 = w6", "w5 = w7")

CLASSICAL_REDUCED_3_2 = (
    "0 <= w3", "0 <= w6", "0 <= w7",
    "w0 + w4 <= 1 + w3", "w0 + w8 <= 1 + w6", "w4 + w8 <= 1 + w7",
    "w3 <= w0", "w3 <= w4", "w6 <= w0", "w6 <= w8", "w7 <= w4", "w7 <= w8",
)  # fmt: skip

BELL_3_2 = (
    "w0 - w3 + w4 - w6 - w7 + w8 <= 1",
    "w0 - w3 - w6 + w7 >= 0",
    "-w3 + w4 + w6 - w7 >= 0",
    "w3 - w6 - w7 + w8 >= 0",
)


def _linear_form(text: str, dim: int) -> Tuple[List[Fraction], Fraction]:
    coefficients = [Fraction(0)] * dim
    constant = Fraction(0)
    for token in SIDE_PATTERN.findall(text):
        match = TERM_PATTERN.match(token)
        if match is None or (match.group(2) is None and match.group(3) is None):
            raise ParseError(f"Can't parse term {token!r}")
        sign = -1 if match.group(1) == "-" else 1
        value = sign * (parse_rational(match.group(2)) if match.group(2) else Fraction(1))
        if match.group(3) is None:
            constant += value
        else:
            index = int(match.group(3))
            if index >= dim:
                raise ValueOutOfRange(f"Coordinate w{index} outside dimension {dim}")
            coefficients[index] += value
    return coefficients, constant


def parse_constraint(text: str, dim: int) -> Tuple[str, RationalVector, Fraction]:
    """Parse ``"w0 + w4 <= 1 + w1"`` into ``("<=", a, b)`` meaning ``a.w <= b``.

    ``>=`` is normalized to ``<=``; ``=`` yields ``("=", c, e)``.
    """
    match = CONSTRAINT_PATTERN.match(text.replace(" ", ""))
    if match is None:
        raise ParseError(f"Not a linear constraint: {text!r}")
    left, op, right = match.groups()
    left_a, left_b = _linear_form(left, dim)
    right_a, right_b = _linear_form(right, dim)
    a = tuple(l - r for l, r in zip(left_a, right_a))
    b = right_b - left_b
    if op == ">=":
        return "<=", tuple(-v for v in a), -b
    return op, a, b


def polytope_from_text(dim: int, constraints: Sequence[str]) -> HPolytope:
    inequalities = []
    equations = []
    for text in constraints:
        op, a, b = parse_constraint(text, dim)
        (equations if op == "=" else inequalities).append((a, b))
    return HPolytope(dim, tuple(inequalities), tuple(equations))


def sync_ns_polytope_3_2() -> HPolytope:
    return polytope_from_text(9, SYNC_NS_3_2)


def classical_polytope_3_2() -> HPolytope:
    return polytope_from_text(9, SYMMETRY_3_2 + CLASSICAL_REDUCED_3_2 + BELL_3_2)


def sync_ns_polytope_w(n: int) -> HPolytope:
    """Synchronous nonsignaling correlations into two outputs, for any ``n`` inputs.

    Nonnegativity of every off-diagonal ``w(xA, xB)`` together with, for each ordered pair
    ``xA != xB``: ``w(xA, xB) <= w(xA, xA)``, ``w(xA, xB) <= w(xB, xB)`` and
    ``w(xA, xA) + w(xB, xB) <= 1 + w(xA, xB)``. A single input only needs ``0 <= w0 <= 1``.
    """
    if n < 1:
        raise ValueOutOfRange(f"Need at least one input, got {n}")
    if n == 1:
        return polytope_from_text(1, ("0 <= w0", "w0 <= 1"))

    def w(a, b):
        return f"w{n * a + b}"

    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    constraints = [f"0 <= {w(a, b)}" for a, b in pairs]
    constraints += [f"{w(a, a)} + {w(b, b)} <= 1 + {w(a, b)}" for a, b in pairs]
    constraints += [f"{w(a, b)} <= {w(a, a)}" for a, b in pairs]
    constraints += [f"{w(a, b)} <= {w(b, b)}" for a, b in pairs]
    return polytope_from_text(n * n, constraints)


def _entry(shape: GameShape, y_a: int, y_b: int, x_a: int, x_b: int) -> int:
    return shape.row_index(y_a, y_b) * shape.columns + shape.column_index(x_a, x_b)


def sync_polytope(shape: GameShape, nonsignaling: bool = False) -> HPolytope:
    """Definitional H-representation over all ``m² n²`` entries, flattened row-major.

    Stochastic columns, zero off-diagonal outputs on equal inputs, and optionally the
    nonsignaling equalities.
    """
    n, m = shape.n, shape.m
    dim = shape.rows * shape.columns

    def unit(indices: Dict[int, int]) -> Tuple[int, ...]:
        return tuple(indices.get(k, 0) for k in range(dim))

    inequalities = []
    equations = []
    for y_a, y_b, x_a, x_b in itertools.product(range(m), range(m), range(n), range(n)):
        k = _entry(shape, y_a, y_b, x_a, x_b)
        if x_a == x_b and y_a != y_b:
            equations.append((unit({k: 1}), 0))
        else:
            inequalities.append((unit({k: -1}), 0))
    for x_a, x_b in itertools.product(range(n), range(n)):
        column = {_entry(shape, y_a, y_b, x_a, x_b): 1 for y_a in range(m) for y_b in range(m)}
        equations.append((unit(column), 1))

    if nonsignaling:
        for y, x, other in itertools.product(range(m), range(n), range(1, n)):
            # Alice's marginal at (x, other) equals the one at (x, 0); same for Bob.
            alice = {_entry(shape, y, y_b, x, other): 1 for y_b in range(m)}
            for y_b in range(m):
                alice[_entry(shape, y, y_b, x, 0)] = -1
            equations.append((unit(alice), 0))
            bob = {_entry(shape, y_a, y, other, x): 1 for y_a in range(m)}
            for y_a in range(m):
                bob[_entry(shape, y_a, y, 0, x)] = -1
            equations.append((unit(bob), 0))
    return HPolytope(dim, tuple(inequalities), tuple(equations))
