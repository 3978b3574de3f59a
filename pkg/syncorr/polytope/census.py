"""Measured dimensions and vertex counts of synchronous correlation polytopes."""
import itertools
import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional, Tuple

from syncorr.core.config import DEFAULT_SETTINGS
from syncorr.core.types import GameShape
from syncorr.polytope.double_description import VPolytope, affine_dimension, dd_enumerate
from syncorr.polytope.polytopes import sync_polytope

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CensusEntry:
    game: str
    nonsignaling: bool
    dimension: Optional[int]
    deterministic_count: Optional[int]
    dd_count: Optional[int]

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def deterministic_sync_tables(shape: GameShape) -> List[Tuple[int, ...]]:
    """Flattened 0/1 tables picking one output pair per input pair, agreeing on equal inputs."""
    n, m = shape.n, shape.m
    choices = []
    for x_a, x_b in itertools.product(range(n), range(n)):
        if x_a == x_b:
            choices.append([(y, y) for y in range(m)])
        else:
            choices.append(list(itertools.product(range(m), range(m))))
    tables = []
    for picks in itertools.product(*choices):
        table = [0] * (shape.rows * shape.columns)
        for column, (y_a, y_b) in enumerate(picks):
            table[shape.row_index(y_a, y_b) * shape.columns + column] = 1
        tables.append(tuple(table))
    return tables


def census(
    shape: GameShape, nonsignaling: bool, cap: Optional[int] = None, dd_cap: int = 512
) -> CensusEntry:
    """Count vertices of the synchronous (optionally nonsignaling) polytope of ``shape``.

    Without nonsignaling the vertices are the deterministic synchronous tables, counted
    directly when there are at most ``cap`` of them; double description runs when that count
    is at most ``dd_cap``. The nonsignaling polytope is only reachable by double description.
    """
    cap = DEFAULT_SETTINGS.function_cap if cap is None else cap
    n, m = shape.n, shape.m
    deterministic: Optional[List[Tuple[int, ...]]] = None
    dimension = None
    dd_count = None
    if not nonsignaling:
        expected = m ** (2 * n * n - n)
        if expected <= cap:
            deterministic = deterministic_sync_tables(shape)
            dimension = affine_dimension(VPolytope(shape.rows * shape.columns, tuple(deterministic)))
        if expected <= dd_cap:
            dd_count = len(dd_enumerate(sync_polytope(shape, False)))
    else:
        vertices = dd_enumerate(sync_polytope(shape, True))
        dd_count = len(vertices)
        dimension = affine_dimension(vertices)
    entry = CensusEntry(
        shape.label,
        nonsignaling,
        dimension,
        len(deterministic) if deterministic is not None else None,
        dd_count,
    )
    logger.debug(f"census {entry}")
    return entry
