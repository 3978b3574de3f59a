import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from syncorr.core.config import DEFAULT_SETTINGS
from syncorr.core.errors import (
    CommutationViolation,
    DegenerateGap,
    DimensionMismatch,
    NotNormalized,
    NotSynchronous,
)
from syncorr.correlation.correlation import Correlation, convex_combine, distance, is_synchronous
from syncorr.quantum.pvm import PVMFamily
from syncorr.quantum.strategies import (
    GeneralQuantumStrategy,
    correlation_from_tensor,
    correlation_general,
    density,
    real_part,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    """``psi = sum_k coefficients[k] * left[:, k] (x) right[:, k]``, coefficients nonincreasing."""

    coefficients: np.ndarray
    left: np.ndarray
    right: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.coefficients)


def schmidt(psi: np.ndarray, d_a: int, d_b: int, tol: Optional[float] = None) -> SchmidtDecomposition:
    tol = DEFAULT_SETTINGS.tol if tol is None else tol
    psi = np.asarray(psi, dtype=np.complex128)
    if psi.shape != (d_a * d_b,):
        raise DimensionMismatch((d_a * d_b,), psi.shape)
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1) > tol:
        raise NotNormalized(norm)
    u, s, vh = np.linalg.svd(psi.reshape(d_a, d_b))
    rank = int(np.sum(s > tol))
    return SchmidtDecomposition(s[:rank], u[:, :rank], vh[:rank, :].T)


@dataclass(frozen=True, eq=False)
class SchmidtBlock:
    """One eigenspace of the reduced states, carrying a maximally entangled strategy."""

    weight: float
    dimension: int
    coefficient: float
    alice: PVMFamily
    bob: PVMFamily
    correlation: Correlation


@dataclass(frozen=True, eq=False)
class SchmidtBlocks:
    blocks: List[SchmidtBlock]
    residual: float

    @property
    def weights(self) -> List[float]:
        return [block.weight for block in self.blocks]

    def recombine(self, tol: Optional[float] = None) -> Correlation:
        return convex_combine([(block.weight, block.correlation) for block in self.blocks], tol)


class SchmidtGrouping:
    """Splits nonincreasing Schmidt coefficients into runs of equal values.

    Neighbours closer than ``tol`` are merged, neighbours further apart than ``split_gap``
    are split, and anything in between is refused.
    """

    logger = logging.getLogger("SchmidtGrouping")

    def __init__(self, tol: float, split_gap: float):
        self.tol = tol
        self.split_gap = split_gap

    def groups(self, coefficients: np.ndarray) -> List[Tuple[int, int]]:
        runs = []
        start = 0
        for k in range(1, len(coefficients)):
            gap = float(coefficients[k - 1] - coefficients[k])
            if gap <= self.tol:
                continue
            if gap <= self.split_gap:
                raise DegenerateGap(gap, k - 1)
            runs.append((start, k))
            start = k
        if len(coefficients):
            runs.append((start, len(coefficients)))
        self.logger.debug(f"groups: {[stop - begin for begin, stop in runs]} from {len(coefficients)} coefficients")
        return runs


def _commutation(ops: np.ndarray, reduced: np.ndarray) -> float:
    commutators = ops @ reduced - reduced @ ops
    return float(np.abs(commutators).max()) if commutators.size else 0.0


def decompose_me(
    psi: np.ndarray,
    povms_a: PVMFamily,
    povms_b: PVMFamily,
    tol: Optional[float] = None,
    split_gap: Optional[float] = None,
) -> SchmidtBlocks:
    """Write the correlation of a pure synchronous strategy as a mixture of maximally entangled ones.

    Each run of equal Schmidt coefficients ``s`` with multiplicity ``l`` becomes one block of
    weight ``l * s**2``, with measurements restricted to the spans of its Schmidt vectors.
    """
    tol = DEFAULT_SETTINGS.tol if tol is None else tol
    split_gap = DEFAULT_SETTINGS.schmidt_split_gap if split_gap is None else split_gap
    d_a, d_b = povms_a.d, povms_b.d
    decomposition = schmidt(psi, d_a, d_b, tol)
    strategy = GeneralQuantumStrategy.build(
        density(psi), povms_a.projectors, povms_b.projectors, tol
    )
    p = correlation_general(strategy, tol)
    check = is_synchronous(p, tol)
    if not check:
        raise NotSynchronous(check.offenders, check.max_deviation)

    matrix = np.asarray(psi, dtype=np.complex128).reshape(d_a, d_b)
    rho_a = matrix @ matrix.conj().T
    rho_b = matrix.T @ matrix.conj()
    deviation = _commutation(povms_a.projectors, rho_a)
    if deviation > tol:
        raise CommutationViolation(deviation, "A")
    deviation = _commutation(povms_b.projectors, rho_b)
    if deviation > tol:
        raise CommutationViolation(deviation, "B")

    blocks = []
    for start, stop in SchmidtGrouping(tol, split_gap).groups(decomposition.coefficients):
        size = stop - start
        coefficient = float(np.mean(decomposition.coefficients[start:stop]))
        left = decomposition.left[:, start:stop]
        right = decomposition.right[:, start:stop]
        alice = left.conj().T @ povms_a.projectors @ left
        bob = right.conj().T @ povms_b.projectors @ right
        # <psi_j| E (x) F |psi_j> with psi_j = (1/sqrt l) sum_k |a_k>|b_k>.
        traces = np.einsum("abij,cdij->bdac", alice, bob) / size
        correlation = correlation_from_tensor(real_part(traces, tol), tol)
        blocks.append(
            SchmidtBlock(
                weight=size * coefficient**2,
                dimension=size,
                coefficient=coefficient,
                alice=PVMFamily(size, povms_a.n, povms_a.m, alice),
                bob=PVMFamily(size, povms_b.n, povms_b.m, bob),
                correlation=correlation,
            )
        )

    result = SchmidtBlocks(blocks, 0.0)
    residual = distance(result.recombine(), p)
    logger.debug(f"decompose_me: {len(blocks)} blocks, weights {result.weights}, residual {residual:.3e}")
    return SchmidtBlocks(blocks, residual)


def block_strategy(
    weights: Sequence[float], families: Sequence[PVMFamily]
) -> Tuple[np.ndarray, PVMFamily, PVMFamily]:
    """Direct sum of maximally entangled strategies mixed with ``weights``.

    Returns the state ``sum_j sqrt(w_j / l_j) sum_{k in block j} |k>|k>`` together with
    block-diagonal measurements for Alice and their conjugates for Bob.
    """
    if len(weights) != len(families) or not families:
        raise DimensionMismatch((len(families),), (len(weights),))
    n, m = families[0].n, families[0].m
    total = sum(f.d for f in families)
    psi = np.zeros(total * total, dtype=np.complex128)
    ops = np.zeros((n, m, total, total), dtype=np.complex128)
    offset = 0
    for weight, family in zip(weights, families):
        if (family.n, family.m) != (n, m):
            raise DimensionMismatch((n, m), (family.n, family.m))
        for k in range(offset, offset + family.d):
            psi[k * total + k] = np.sqrt(weight / family.d)
        ops[:, :, offset : offset + family.d, offset : offset + family.d] = family.projectors
        offset += family.d
    alice = PVMFamily(total, n, m, ops)
    return psi, alice, alice.conjugate()
