"""Seeded random strategies for property checks."""
from typing import List, Optional

import numpy as np

from syncorr.quantum.pvm import PVMFamily, validate_pvm


def spawn_rngs(seed: int, count: int) -> List[np.random.Generator]:
    """Independent generators, one per sample, so results never depend on evaluation order."""
    return [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(count)]


def haar_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def random_pvm_family(
    rng: np.random.Generator, d: int, n: int, m: int, tol: Optional[float] = None
) -> PVMFamily:
    """Each measurement is a Haar-random basis whose vectors are dealt to random outcomes."""
    projectors = np.zeros((n, m, d, d), dtype=np.complex128)
    for x in range(n):
        basis = haar_unitary(rng, d)
        outcomes = rng.integers(0, m, size=d)
        for column, y in enumerate(outcomes):
            vector = basis[:, column]
            projectors[x, y] += np.outer(vector, vector.conj())
    return validate_pvm(projectors, tol)
