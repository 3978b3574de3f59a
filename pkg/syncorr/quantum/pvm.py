from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence

import numpy as np

from syncorr.core.config import DEFAULT_SETTINGS
from syncorr.core.errors import (
    DimensionMismatch,
    InvalidState,
    NotComplete,
    NotHermitian,
    NotIdempotent,
    NotPositive,
    ParseError,
)


@dataclass(frozen=True, eq=False)
class PVMFamily:
    """``projectors[x, y]`` is the d x d operator for outcome ``y`` of measurement ``x``."""

    d: int
    n: int
    m: int
    projectors: np.ndarray

    def __post_init__(self):
        expected = (self.n, self.m, self.d, self.d)
        if self.projectors.shape != expected:
            raise DimensionMismatch(expected, self.projectors.shape)
        self.projectors.setflags(write=False)

    def operator(self, x: int, y: int) -> np.ndarray:
        return self.projectors[x, y]

    def conjugate(self) -> "PVMFamily":
        """Entrywise complex conjugate in the standard basis; Bob's side of ``correlation_me``."""
        return PVMFamily(self.d, self.n, self.m, self.projectors.conj())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "d": self.d,
            "n": self.n,
            "m": self.m,
            "projectors": np.stack([self.projectors.real, self.projectors.imag], axis=-1).tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], tol: Optional[float] = None) -> "PVMFamily":
        try:
            raw = np.asarray(data["projectors"], dtype=np.float64)
            d, n, m = int(data["d"]), int(data["n"]), int(data["m"])
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"Malformed PVM document: {e}")
        if raw.shape != (n, m, d, d, 2):
            raise DimensionMismatch((n, m, d, d, 2), raw.shape)
        return validate_pvm(raw[..., 0] + 1j * raw[..., 1], tol)


def _operators(raw: Any) -> np.ndarray:
    try:
        ops = np.asarray(raw, dtype=np.complex128)
    except (TypeError, ValueError) as e:
        raise ParseError(f"Operators are not numeric: {e}")
    if ops.ndim != 4 or ops.shape[2] != ops.shape[3]:
        raise DimensionMismatch(("n", "m", "d", "d"), ops.shape)
    if not np.all(np.isfinite(ops)):
        raise InvalidState("Operators contain non-finite entries")
    return ops


def _max_location(deviations: np.ndarray):
    index = np.unravel_index(int(np.argmax(deviations)), deviations.shape)
    return float(deviations[index]), tuple(int(i) for i in index)


def _check_hermitian(ops: np.ndarray, tol: float):
    deviations = np.abs(ops - ops.conj().swapaxes(-1, -2)).max(axis=(-1, -2))
    maxdev, location = _max_location(deviations)
    if maxdev > tol:
        raise NotHermitian(maxdev, location)


def _check_complete(ops: np.ndarray, tol: float):
    identity = np.eye(ops.shape[-1])
    deviations = np.abs(ops.sum(axis=1) - identity).max(axis=(-1, -2))
    maxdev, location = _max_location(deviations)
    if maxdev > tol:
        raise NotComplete(maxdev, location[0])


def validate_pvm(raw: Any, tol: Optional[float] = None) -> PVMFamily:
    """Accept ``raw[x][y]`` iff every operator is a Hermitian projector and each ``x`` sums to I."""
    tol = DEFAULT_SETTINGS.tol if tol is None else tol
    ops = _operators(raw)
    n, m, d, _ = ops.shape
    _check_hermitian(ops, tol)
    deviations = np.abs(ops @ ops - ops).max(axis=(-1, -2))
    maxdev, location = _max_location(deviations)
    if maxdev > tol:
        raise NotIdempotent(maxdev, location)
    _check_complete(ops, tol)
    return PVMFamily(d, n, m, ops)


def validate_povm(raw: Any, tol: Optional[float] = None) -> np.ndarray:
    """Hermitian, positive semidefinite and complete; projectivity is not required."""
    tol = DEFAULT_SETTINGS.tol if tol is None else tol
    ops = _operators(raw)
    _check_hermitian(ops, tol)
    hermitian = (ops + ops.conj().swapaxes(-1, -2)) / 2
    lowest = np.linalg.eigvalsh(hermitian).min(axis=-1)
    index = np.unravel_index(int(np.argmin(lowest)), lowest.shape)
    if lowest[index] < -tol:
        raise NotPositive(float(lowest[index]), tuple(int(i) for i in index))
    _check_complete(ops, tol)
    ops.setflags(write=False)
    return ops


def pvm_from_kets(kets: Sequence[Sequence[complex]], tol: Optional[float] = None) -> PVMFamily:
    """Two-outcome measurements with ``E^x_1 = |k_x><k_x|`` and ``E^x_0 = I - E^x_1``."""
    vectors = np.asarray(kets, dtype=np.complex128)
    if vectors.ndim != 2:
        raise DimensionMismatch(("n", "d"), vectors.shape)
    norms = np.linalg.norm(vectors, axis=1, keepdims=True)
    if np.any(norms == 0):
        raise InvalidState("Zero ket")
    vectors = vectors / norms
    d = vectors.shape[1]
    ones = np.einsum("xi,xj->xij", vectors, vectors.conj())
    zeros = np.eye(d) - ones
    return validate_pvm(np.stack([zeros, ones], axis=1), tol)
