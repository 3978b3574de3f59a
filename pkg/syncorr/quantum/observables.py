from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from syncorr.core.config import DEFAULT_SETTINGS
from syncorr.core.errors import CertificateMismatch, OutcomeCountNotTwo, ShapeMismatch
from syncorr.core.types import BellFunctional, ScalarMode
from syncorr.polytope.bell import BellReport, bell_values, report_from_values
from syncorr.polytope.coordinates import w_coordinates
from syncorr.quantum.pvm import PVMFamily
from syncorr.quantum.strategies import correlation_me, real_part

# Sign patterns up to a global sign, keyed by the pairwise products (s0 s1, s0 s2, s1 s2).
SIGN_FUNCTIONALS: Dict[Tuple[int, int, int], BellFunctional] = {
    (1, 1, 1): BellFunctional.J0,
    (-1, -1, 1): BellFunctional.J1,
    (-1, 1, -1): BellFunctional.J2,
    (1, -1, -1): BellFunctional.J3,
}


@dataclass(frozen=True, eq=False)
class ObservableTraces:
    """Normalized traces of the observables ``M_x = E^x_0 - E^x_1``."""

    d: int
    m_x: np.ndarray
    m_xy: np.ndarray

    @property
    def n(self) -> int:
        return len(self.m_x)


def observables(pvms: PVMFamily) -> np.ndarray:
    if pvms.m != 2:
        raise OutcomeCountNotTwo(pvms.m)
    return pvms.projectors[:, 0] - pvms.projectors[:, 1]


def observable_traces(pvms: PVMFamily, tol: Optional[float] = None) -> ObservableTraces:
    tol = DEFAULT_SETTINGS.tol if tol is None else tol
    ops = observables(pvms)
    m_x = np.einsum("xii->x", ops) / pvms.d
    m_xy = np.einsum("aij,bji->ab", ops, ops) / pvms.d
    return ObservableTraces(pvms.d, real_part(m_x, tol), real_part(m_xy, tol))


def bell_from_traces(t: ObservableTraces, tol: Optional[float] = None) -> BellReport:
    if t.n != 3:
        raise ShapeMismatch(f"Bell functionals need three observables, got {t.n}")
    m01, m02, m12 = float(t.m_xy[0, 1]), float(t.m_xy[0, 2]), float(t.m_xy[1, 2])
    one_minus_j0 = (1 + m01 + m02 + m12) / 4
    j1 = (1 - m01 - m02 + m12) / 4
    j2 = (1 - m01 + m02 - m12) / 4
    j3 = (1 + m01 - m02 - m12) / 4
    return report_from_values((1 - one_minus_j0, j1, j2, j3), ScalarMode.FLOAT, tol)


@dataclass(frozen=True)
class TraceCertificate:
    signs: Tuple[int, int, int]
    functional: BellFunctional
    certificate: float
    functional_value: float
    deviation: float


def tsirelson_certificate(
    pvms: PVMFamily, signs: Sequence[int], tol: Optional[float] = None
) -> TraceCertificate:
    """``tr((s0 M0 + s1 M1 + s2 M2)^2) / (8d) - 1/8`` against the matching functional.

    The value is at least ``-1/8`` because the trace of a square is nonnegative. The
    functional is ``1 - J0`` for J0 and ``Jk`` otherwise, computed independently from the
    correlation.
    """
    tol = DEFAULT_SETTINGS.tol if tol is None else tol
    if pvms.n != 3:
        raise ShapeMismatch(f"Trace certificate needs three measurements, got {pvms.n}")
    signs = tuple(int(s) for s in signs)
    if len(signs) != 3 or any(s not in (1, -1) for s in signs):
        raise ValueError(f"Signs must be three values of +1 or -1. Got: {signs}")
    s0, s1, s2 = signs
    functional = SIGN_FUNCTIONALS[(s0 * s1, s0 * s2, s1 * s2)]

    ops = observables(pvms)
    combined = np.tensordot(np.array(signs, dtype=np.float64), ops, axes=1)
    square = np.trace(combined @ combined)
    certificate = float(square.real) / (8 * pvms.d) - 1 / 8

    report = bell_values(w_coordinates(correlation_me(pvms, tol)), tol)
    value = report.deficits()[functional]
    deviation = abs(certificate - float(value))
    if deviation > tol:
        raise CertificateMismatch(deviation)
    return TraceCertificate(signs, functional, certificate, float(value), deviation)
