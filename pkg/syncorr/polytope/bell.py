import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from syncorr.core.config import DEFAULT_SETTINGS
from syncorr.core.errors import ShapeMismatch
from syncorr.core.types import BellFunctional, RationalVector, Scalar, ScalarMode
from syncorr.core.utils import format_rational
from syncorr.polytope.coordinates import WCoordinates
from syncorr.polytope.double_description import VPolytope, dd_enumerate
from syncorr.polytope.polytopes import sync_ns_polytope_3_2

logger = logging.getLogger(__name__)

# Coefficients of J0..J3 in w0..w8.
BELL_COEFFICIENTS: Dict[BellFunctional, Tuple[int, ...]] = {
    BellFunctional.J0: (1, 0, 0, -1, 1, 0, -1, -1, 1),
    BellFunctional.J1: (1, 0, 0, -1, 0, 0, -1, 1, 0),
    BellFunctional.J2: (0, 0, 0, -1, 1, 0, 1, -1, 0),
    BellFunctional.J3: (0, 0, 0, 1, 0, 0, -1, -1, 1),
}


@dataclass(frozen=True)
class BellReport:
    """Values of the four Bell functionals. Classical strategies satisfy J0 <= 1 and J1, J2, J3 >= 0."""

    j0: Scalar
    j1: Scalar
    j2: Scalar
    j3: Scalar
    violated: Optional[BellFunctional] = None
    magnitude: Scalar = 0
    violations: Tuple[BellFunctional, ...] = field(default_factory=tuple)

    def value(self, functional: BellFunctional) -> Scalar:
        return (self.j0, self.j1, self.j2, self.j3)[functional]

    def deficits(self) -> Tuple[Scalar, Scalar, Scalar, Scalar]:
        """``(1 - J0, J1, J2, J3)``: all four are nonnegative on classical strategies."""
        return (1 - self.j0, self.j1, self.j2, self.j3)

    def to_dict(self) -> Dict[str, Any]:
        def fmt(v):
            return format_rational(v) if isinstance(v, Fraction) else float(v)

        return {
            "J0": fmt(self.j0),
            "J1": fmt(self.j1),
            "J2": fmt(self.j2),
            "J3": fmt(self.j3),
            "violated": self.violated.name if self.violated is not None else None,
            "magnitude": fmt(self.magnitude),
        }


def report_from_values(
    values: Tuple[Scalar, Scalar, Scalar, Scalar], mode: ScalarMode, tol: Optional[float] = None
) -> BellReport:
    tol = DEFAULT_SETTINGS.tol if tol is None else tol
    slack = 0 if mode is ScalarMode.RATIONAL else tol
    j0, j1, j2, j3 = values
    excess = [j0 - 1, -j1, -j2, -j3]
    violations = tuple(BellFunctional(k) for k, e in enumerate(excess) if e > slack)
    if not violations:
        zero = Fraction(0) if mode is ScalarMode.RATIONAL else 0.0
        return BellReport(j0, j1, j2, j3, magnitude=zero)
    worst = max(violations, key=lambda k: excess[k])
    return BellReport(j0, j1, j2, j3, worst, excess[worst], violations)


def bell_values(w: WCoordinates, tol: Optional[float] = None) -> BellReport:
    if w.n != 3:
        raise ShapeMismatch(f"Bell functionals are defined for three inputs, got {w.n}")
    values = tuple(
        sum((c * w[k] for k, c in enumerate(BELL_COEFFICIENTS[j]) if c), w[0] * 0)
        for j in BellFunctional
    )
    return report_from_values(values, w.mode, tol)


@dataclass(frozen=True)
class VertexClassification:
    vertices: VPolytope
    violating: Dict[BellFunctional, List[RationalVector]]
    non_violating: List[RationalVector]
    max_violation: Fraction

    @property
    def violating_count(self) -> int:
        return sum(len(v) for v in self.violating.values())

    def patterns(self) -> Dict[BellFunctional, List[Tuple[Fraction, ...]]]:
        """Distinct ``(1 - J0, J1, J2, J3)`` tuples seen in each violating class."""
        result = {}
        for functional, vertices in self.violating.items():
            seen = {bell_values(WCoordinates.of(v)).deficits() for v in vertices}
            result[functional] = sorted(seen)
        return result


def ns_vertex_classification() -> VertexClassification:
    """Split the vertices of the (3, 2) synchronous nonsignaling polytope by Bell violation."""
    polytope = dd_enumerate(sync_ns_polytope_3_2())
    violating: Dict[BellFunctional, List[RationalVector]] = {j: [] for j in BellFunctional}
    non_violating = []
    max_violation = Fraction(0)
    for vertex in polytope.vertices:
        report = bell_values(WCoordinates.of(vertex))
        if len(report.violations) > 1:
            raise RuntimeError(f"Vertex {vertex} violates {len(report.violations)} Bell inequalities")
        if report.violated is None:
            non_violating.append(vertex)
        else:
            violating[report.violated].append(vertex)
            max_violation = max(max_violation, report.magnitude)
    logger.debug(
        f"classified {len(polytope)} vertices: "
        + ", ".join(f"{j.name}={len(v)}" for j, v in violating.items())
    )
    return VertexClassification(polytope, violating, non_violating, max_violation)
