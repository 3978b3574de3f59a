import logging
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from syncorr.classical.functions import FunctionDistribution
from syncorr.core.config import DEFAULT_SETTINGS
from syncorr.core.errors import DimensionMismatch, ImaginaryResidual, InvalidState, NotPositive
from syncorr.core.types import GameShape, ScalarMode
from syncorr.correlation.correlation import Correlation, validate_stochastic
from syncorr.quantum.pvm import PVMFamily, validate_povm

logger = logging.getLogger(__name__)


def real_part(values: np.ndarray, tol: float) -> np.ndarray:
    residual = float(np.abs(values.imag).max()) if values.size else 0.0
    if residual > tol:
        raise ImaginaryResidual(residual)
    return values.real


def correlation_from_tensor(t: np.ndarray, tol: float) -> Correlation:
    """``t`` indexed ``[yA, yB, xA, xB]``."""
    m, _, n, _ = t.shape
    shape = GameShape(n, m)
    return validate_stochastic(
        t.reshape(shape.rows, shape.columns), shape, tol=tol, mode=ScalarMode.FLOAT
    )


def correlation_me(pvms: PVMFamily, tol: Optional[float] = None) -> Correlation:
    """``p(yA, yB | xA, xB) = tr(E^xA_yA E^xB_yB) / d``.

    This is the correlation of the maximally entangled state with Bob measuring the complex
    conjugates of Alice's projectors.
    """
    tol = DEFAULT_SETTINGS.tol if tol is None else tol
    traces = np.einsum("abij,cdji->bdac", pvms.projectors, pvms.projectors) / pvms.d
    return correlation_from_tensor(real_part(traces, tol), tol)


@dataclass(frozen=True, eq=False)
class GeneralQuantumStrategy:
    """A density operator on ``C^dA (x) C^dB`` with per-input POVMs on each factor."""

    d_a: int
    d_b: int
    state: np.ndarray
    povms_a: np.ndarray
    povms_b: np.ndarray

    @classmethod
    def build(
        cls, state: Any, povms_a: Any, povms_b: Any, tol: Optional[float] = None
    ) -> "GeneralQuantumStrategy":
        tol = DEFAULT_SETTINGS.tol if tol is None else tol
        ops_a = validate_povm(povms_a, tol)
        ops_b = validate_povm(povms_b, tol)
        if ops_a.shape[:2] != ops_b.shape[:2]:
            raise DimensionMismatch(ops_a.shape[:2], ops_b.shape[:2])
        d_a, d_b = ops_a.shape[-1], ops_b.shape[-1]
        rho = np.asarray(state, dtype=np.complex128)
        if rho.shape != (d_a * d_b, d_a * d_b):
            raise DimensionMismatch((d_a * d_b, d_a * d_b), rho.shape)
        if np.abs(rho - rho.conj().T).max() > tol:
            raise InvalidState("Density operator is not Hermitian")
        if abs(np.trace(rho) - 1) > tol:
            raise InvalidState(f"Density operator has trace {np.trace(rho)}")
        lowest = float(np.linalg.eigvalsh((rho + rho.conj().T) / 2).min())
        if lowest < -tol:
            raise NotPositive(lowest)
        rho.setflags(write=False)
        return cls(d_a, d_b, rho, ops_a, ops_b)

    @property
    def n(self) -> int:
        return self.povms_a.shape[0]

    @property
    def m(self) -> int:
        return self.povms_a.shape[1]


def correlation_general(s: GeneralQuantumStrategy, tol: Optional[float] = None) -> Correlation:
    """``p(yA, yB | xA, xB) = tr(rho (E^xA_yA (x) F^xB_yB))``."""
    tol = DEFAULT_SETTINGS.tol if tol is None else tol
    rho = s.state.reshape(s.d_a, s.d_b, s.d_a, s.d_b)
    t = np.einsum("ikjl,abji,cdlk->bdac", rho, s.povms_a, s.povms_b)
    return correlation_from_tensor(real_part(t, tol), tol)


def maximally_entangled(d: int) -> np.ndarray:
    """``(1/sqrt d) sum_j |j>|j>`` as a vector of length ``d*d``."""
    return np.eye(d, dtype=np.complex128).reshape(d * d) / np.sqrt(d)


def density(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=np.complex128)
    return np.outer(psi, psi.conj())


def me_strategy(pvms: PVMFamily, tol: Optional[float] = None) -> GeneralQuantumStrategy:
    """The maximally entangled strategy behind ``correlation_me(pvms)``."""
    psi = maximally_entangled(pvms.d)
    return GeneralQuantumStrategy.build(
        density(psi), pvms.projectors, pvms.conjugate().projectors, tol
    )


def partial_trace_b(rho: np.ndarray, d_a: int, d_b: int) -> np.ndarray:
    """``tr_B(rho)``, the reduced state on Alice's factor."""
    return np.einsum("ikjk->ij", np.asarray(rho).reshape(d_a, d_b, d_a, d_b))


def partial_trace_a(rho: np.ndarray, d_a: int, d_b: int) -> np.ndarray:
    """``tr_A(rho)``, the reduced state on Bob's factor."""
    return np.einsum("kikj->ij", np.asarray(rho).reshape(d_a, d_b, d_a, d_b))


def classical_embedding(mu: FunctionDistribution) -> GeneralQuantumStrategy:
    """Diagonal strategy reproducing ``mu``.

    Both players hold a copy of the hidden index ``k`` of the support, with
    ``rho = sum_k mu_k |k k><k k|``, and answer ``f_k(x)`` by measuring in the computational
    basis.
    """
    support = mu.support()
    k = len(support)
    shape = mu.shape
    rho = np.zeros((k * k, k * k), dtype=np.complex128)
    ops = np.zeros((shape.n, shape.m, k, k), dtype=np.complex128)
    for index, f in enumerate(support):
        rho[index * k + index, index * k + index] = float(mu.weights[f])
        for x in range(shape.n):
            ops[x, f(x), index, index] = 1.0
    return GeneralQuantumStrategy.build(rho, ops, ops)
