import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from syncorr.core.config import DEFAULT_SETTINGS
from syncorr.core.types import BellFunctional
from syncorr.correlation.codec import correlation_to_dict
from syncorr.correlation.correlation import Correlation, distance
from syncorr.quantum.strategies import correlation_me
from syncorr.search.bloch import TWO_PI, SumDiffAngles, qubit_pvms, target_values

ARGMIN_TOL = 1e-6
DISTINCT_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class SearchResult:
    target: BellFunctional
    min_value: float
    argmin: List[SumDiffAngles]
    canonical_matrix: Correlation
    distinct_matrices: int
    grid_steps: int
    refine_tol: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "target": self.target.name,
            "min_value": self.min_value,
            "argmin": [list(a.as_tuple()) for a in self.argmin],
            "distinct_matrices": self.distinct_matrices,
            "grid_steps": self.grid_steps,
            "refine_tol": self.refine_tol,
            "canonical_matrix": correlation_to_dict(self.canonical_matrix),
        }


def _periodic_distance(a: Tuple[float, ...], b: Tuple[float, ...]) -> float:
    gaps = np.abs(np.subtract(a, b)) % TWO_PI
    return float(np.max(np.minimum(gaps, TWO_PI - gaps)))


class BlochSearch:
    """Grid-then-refine minimization over (rho, sigma, delta) in [0, 2 pi)^3.

    The grid marks periodic local minima close to the grid minimum. Each is refined by
    coordinate descent with the step shrinking by 10 per round until it drops below
    ``refine_tol``, then polished with a few Newton steps on finite differences.
    """

    logger = logging.getLogger("BlochSearch")

    def __init__(
        self,
        target: BellFunctional,
        grid_steps: Optional[int] = None,
        refine_tol: Optional[float] = None,
        slack: float = 0.02,
        max_candidates: int = 64,
    ):
        self.target = target
        self.grid_steps = DEFAULT_SETTINGS.grid_steps if grid_steps is None else grid_steps
        self.refine_tol = DEFAULT_SETTINGS.refine_tol if refine_tol is None else refine_tol
        if self.grid_steps < 64:
            raise ValueError(f"Grid needs at least 64 steps per axis. Got: {self.grid_steps}")
        self.slack = slack
        self.max_candidates = max_candidates

    def objective(self, point) -> float:
        return float(target_values(self.target, point[0], point[1], point[2]))

    def _grid(self) -> Tuple[np.ndarray, np.ndarray]:
        axis = np.arange(self.grid_steps) * (TWO_PI / self.grid_steps)
        values = target_values(
            self.target, axis[:, None, None], axis[None, :, None], axis[None, None, :]
        )
        return axis, values

    def _candidates(self, axis: np.ndarray, values: np.ndarray) -> List[np.ndarray]:
        minimal = np.ones(values.shape, dtype=bool)
        for dim in range(3):
            for shift in (1, -1):
                minimal &= values <= np.roll(values, shift, axis=dim)
        minimal &= values <= values.min() + self.slack
        indices = np.argwhere(minimal)
        order = sorted(range(len(indices)), key=lambda k: (values[tuple(indices[k])], tuple(indices[k])))
        chosen = [axis[indices[k]] for k in order[: self.max_candidates]]
        self.logger.debug(f"{self.target.name}: {len(indices)} grid minima, refining {len(chosen)}")
        return chosen

    def _descend(self, point: np.ndarray) -> np.ndarray:
        point = point.astype(np.float64).copy()
        value = self.objective(point)
        step = TWO_PI / self.grid_steps
        while step > self.refine_tol:
            improved = True
            while improved:
                improved = False
                for dim in range(3):
                    for sign in (1.0, -1.0):
                        trial = point.copy()
                        trial[dim] += sign * step
                        trial_value = self.objective(trial)
                        if trial_value < value:
                            point, value = trial, trial_value
                            improved = True
                            break
            step *= 0.1
        return point

    def _polish(self, point: np.ndarray, rounds: int = 4, h: float = 1e-4) -> np.ndarray:
        value = self.objective(point)
        eye = np.eye(3)
        for _ in range(rounds):
            gradient = np.array(
                [(self.objective(point + h * e) - self.objective(point - h * e)) / (2 * h) for e in eye]
            )
            hessian = np.empty((3, 3))
            for i in range(3):
                for j in range(3):
                    hessian[i, j] = (
                        self.objective(point + h * eye[i] + h * eye[j])
                        - self.objective(point + h * eye[i] - h * eye[j])
                        - self.objective(point - h * eye[i] + h * eye[j])
                        + self.objective(point - h * eye[i] - h * eye[j])
                    ) / (4 * h * h)
            try:
                if np.linalg.eigvalsh(hessian).min() <= 0:
                    break
                step = np.linalg.solve(hessian, gradient)
            except np.linalg.LinAlgError:
                break
            trial = point - step
            trial_value = self.objective(trial)
            if trial_value > value:
                break
            point, value = trial, trial_value
            if np.max(np.abs(step)) < self.refine_tol:
                break
        return point

    def run(self) -> SearchResult:
        axis, values = self._grid()
        refined = []
        for start in self._candidates(axis, values):
            point = self._polish(self._descend(start))
            refined.append((self.objective(point), SumDiffAngles(*point).canonical()))
        min_value = min(v for v, _ in refined)

        argmin: List[SumDiffAngles] = []
        for value, angles in sorted(refined, key=lambda item: item[1].as_tuple()):
            if value > min_value + ARGMIN_TOL:
                continue
            if any(_periodic_distance(angles.as_tuple(), a.as_tuple()) < ARGMIN_TOL for a in argmin):
                continue
            argmin.append(angles)

        matrices: List[Correlation] = []
        for angles in argmin:
            p = correlation_me(qubit_pvms(angles))
            if all(distance(p, q) > DISTINCT_TOL for q in matrices):
                matrices.append(p)
        self.logger.debug(
            f"{self.target.name}: min {min_value:.12f} at {len(argmin)} points, {len(matrices)} matrices"
        )
        return SearchResult(
            self.target,
            min_value,
            argmin,
            correlation_me(qubit_pvms(argmin[0])),
            len(matrices),
            self.grid_steps,
            self.refine_tol,
        )


def minimize(
    target: BellFunctional, grid_steps: Optional[int] = None, refine_tol: Optional[float] = None
) -> SearchResult:
    return BlochSearch(target, grid_steps, refine_tol).run()
