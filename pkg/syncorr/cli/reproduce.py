"""Recompute every published number from scratch and compare it with the claimed value."""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from syncorr.classical.functions import (
    correlation_from_distribution,
    enumerate_functions,
    random_distribution,
)
from syncorr.classical.membership import classical_membership, two_input_decompose
from syncorr.core.config import DEFAULT_SETTINGS, Settings
from syncorr.core.errors import CertificateMismatch, NotSymmetric, SyncorrError, ValueOutOfRange
from syncorr.core.types import BellFunctional, GameShape
from syncorr.correlation.correlation import distance, from_function
from syncorr.polytope.bell import bell_values, ns_vertex_classification
from syncorr.polytope.census import census
from syncorr.polytope.coordinates import (
    WCoordinates,
    correlation_from_w,
    random_two_point_data,
    two_point_nonsignaling,
    w_coordinates,
)
from syncorr.polytope.double_description import affine_dimension, dd_enumerate
from syncorr.polytope.polytopes import classical_polytope_3_2, sync_ns_polytope_3_2
from syncorr.quantum.observables import tsirelson_certificate
from syncorr.quantum.sampling import random_pvm_family, spawn_rngs
from syncorr.quantum.schmidt import block_strategy, decompose_me
from syncorr.quantum.strategies import correlation_me
from syncorr.search.bloch import qubit_pvms
from syncorr.search.minimize import minimize
from syncorr.search.saturators import reference_saturators

TRACE_DIMENSIONS = (2, 3, 4, 5, 6)
MEMBERSHIP_SHAPES = (GameShape(2, 2), GameShape(3, 2), GameShape(2, 3))
GOLDEN_TOL = 1e-12
SEARCH_TOL = 1e-8

ONE_EIGHTH = Fraction(1, 8)
SIGN_PATTERNS = ((1, 1, 1), (-1, 1, 1), (1, -1, 1), (1, 1, -1))

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SampleCounts:
    """Draws per randomized check. The trace count is per dimension, the membership count per shape."""

    trace: int = 100
    membership: int = 500
    two_input: int = 1000
    blocks: int = 20


DEFAULT_SAMPLES = SampleCounts()


@dataclass(frozen=True)
class ReproductionRow:
    claim: str
    computed: str
    passed: bool

    def to_dict(self) -> Dict[str, Any]:
        return {"claim": self.claim, "computed": self.computed, "pass": self.passed}


class Reproduction:
    """Runs each check in a fixed order; randomized checks draw from generators spawned off ``seed``."""

    logger = logging.getLogger("Reproduction")

    def __init__(self, seed: int, settings: Settings = DEFAULT_SETTINGS, samples: SampleCounts = DEFAULT_SAMPLES):
        self.seed = seed
        self.settings = settings
        self.samples = samples

    def _rngs(self, stream: int, count: int) -> List[np.random.Generator]:
        return spawn_rngs(self.seed + 7919 * stream, count)

    def checks(self) -> List[Callable[[], List[ReproductionRow]]]:
        return [
            self.vertex_counts,
            self.vertex_classification,
            self.golden_matrices,
            self.tsirelson_search,
            self.trace_certificates,
            self.membership_oracle,
            self.two_input_symmetric,
            self.schmidt_blocks,
            self.polytope_census,
        ]

    def run_check(self, check: Callable[[], List[ReproductionRow]]) -> List[ReproductionRow]:
        self.logger.debug(f"running {check.__name__}")
        try:
            return check()
        except (SyncorrError, RuntimeError) as e:
            return [ReproductionRow(check.__name__, f"error: {e}", False)]

    def vertex_counts(self) -> List[ReproductionRow]:
        ns = dd_enumerate(sync_ns_polytope_3_2())
        classical = dd_enumerate(classical_polytope_3_2())
        shape = GameShape(3, 2)
        functions = {
            w_coordinates(from_function(f.values, shape)).as_tuple() for f in enumerate_functions(shape)
        }
        dimension = affine_dimension(classical)
        return [
            ReproductionRow("(3,2) synchronous nonsignaling polytope has 80 vertices", str(len(ns)), len(ns) == 80),
            ReproductionRow(
                "(3,2) classical polytope: the 8 functions, dimension 6",
                f"{len(classical)} vertices, dimension {dimension}",
                set(classical.vertices) == functions and len(functions) == 8 and dimension == 6,
            ),
        ]

    def vertex_classification(self) -> List[ReproductionRow]:
        result = ns_vertex_classification()
        sizes = [len(result.violating[j]) for j in BellFunctional]
        magnitudes = {
            bell_values(WCoordinates.of(v)).magnitude for vs in result.violating.values() for v in vs
        }
        return [
            ReproductionRow(
                "32 vertices violate a Bell inequality, 8 per inequality",
                f"{result.violating_count} ({'/'.join(str(s) for s in sizes)})",
                result.violating_count == 32 and sizes == [8, 8, 8, 8],
            ),
            ReproductionRow(
                "every violating vertex violates by exactly 1/2",
                ", ".join(str(m) for m in sorted(magnitudes)),
                magnitudes == {Fraction(1, 2)},
            ),
        ]

    def golden_matrices(self) -> List[ReproductionRow]:
        rows = []
        for functional, saturator in sorted(reference_saturators().items()):
            regenerated = correlation_me(qubit_pvms(saturator.angles))
            gap = distance(regenerated, saturator.matrix.to_float())
            exact = bell_values(w_coordinates(saturator.matrix))
            if functional is BellFunctional.J0:
                expected = (Fraction(9, 8), Fraction(3, 8), Fraction(3, 8), Fraction(3, 8))
                values = (exact.j0, exact.j1, exact.j2, exact.j3)
                ok = values == expected
                shown = ", ".join(str(v) for v in values)
            else:
                value = exact.value(functional)
                ok = value == -ONE_EIGHTH
                shown = f"{functional.name}={value}"
            numeric = bell_values(w_coordinates(regenerated)).deficits()[functional]
            rows.append(
                ReproductionRow(
                    f"P{int(functional)} regenerated from kets, saturating {functional.name}",
                    f"{shown}; max entry gap {gap:.1e}",
                    ok and gap <= GOLDEN_TOL and abs(numeric + 1 / 8) <= GOLDEN_TOL,
                )
            )
        return rows

    def tsirelson_search(self) -> List[ReproductionRow]:
        rows = []
        saturators = reference_saturators()
        for functional in BellFunctional:
            result = minimize(functional, self.settings.grid_steps, self.settings.refine_tol)
            gap = distance(result.canonical_matrix, saturators[functional].matrix.to_float())
            target = "1-J0" if functional is BellFunctional.J0 else functional.name
            rows.append(
                ReproductionRow(
                    f"min {target} = -1/8 over qubit strategies, one saturating correlation",
                    f"{result.min_value:.12f} at {len(result.argmin)} points, "
                    f"{result.distinct_matrices} matrix, gap to P{int(functional)} {gap:.1e}",
                    abs(result.min_value + 1 / 8) <= SEARCH_TOL
                    and result.distinct_matrices == 1
                    and gap <= SEARCH_TOL,
                )
            )
        return rows

    def trace_certificates(self) -> List[ReproductionRow]:
        worst = 0.0
        lowest = float("inf")
        failures = 0
        most_violated = 0
        for index, d in enumerate(TRACE_DIMENSIONS):
            for rng in self._rngs(10 + index, self.samples.trace):
                pvms = random_pvm_family(rng, d, 3, 2)
                report = bell_values(w_coordinates(correlation_me(pvms)), self.settings.tol)
                most_violated = max(most_violated, len(report.violations))
                for signs in SIGN_PATTERNS:
                    try:
                        cert = tsirelson_certificate(pvms, signs, self.settings.tol)
                    except CertificateMismatch as e:
                        failures += 1
                        worst = max(worst, e.dev)
                        continue
                    worst = max(worst, cert.deviation)
                    lowest = min(lowest, cert.functional_value)
        total = len(TRACE_DIMENSIONS) * self.samples.trace
        return [
            ReproductionRow(
                f"trace identity matches every functional on {total} random PVM triples, d=2..6",
                f"max deviation {worst:.1e}, {failures} mismatches",
                failures == 0 and worst <= 1e-9,
            ),
            ReproductionRow(
                "no quantum sample goes below -1/8",
                f"lowest value {lowest:.12f}",
                lowest >= -1 / 8 - 1e-9,
            ),
            ReproductionRow(
                "no quantum sample violates more than one inequality",
                f"at most {most_violated} violated per sample",
                most_violated <= 1,
            ),
        ]

    def membership_oracle(self) -> List[ReproductionRow]:
        rows = []
        for index, shape in enumerate(MEMBERSHIP_SHAPES):
            exact = 0
            for rng in self._rngs(20 + index, self.samples.membership):
                mu = random_distribution(rng, shape, support=int(rng.integers(1, 5)))
                p = correlation_from_distribution(mu)
                cert = classical_membership(p, cap=self.settings.function_cap)
                if cert.classical and correlation_from_distribution(cert.distribution).same_as(p):
                    exact += 1
            rows.append(
                ReproductionRow(
                    f"{shape.label}: random function mixtures are classical, reproduced exactly",
                    f"{exact}/{self.samples.membership}",
                    exact == self.samples.membership,
                )
            )

        shape = GameShape(3, 2)
        vertices = [v for vs in ns_vertex_classification().violating.values() for v in vs]
        tables = [f.correlation() for f in enumerate_functions(shape)]
        separated = 0
        drawn = 0
        for rng in self._rngs(30, self.samples.membership):
            vertex = vertices[int(rng.integers(len(vertices)))]
            inner = w_coordinates(correlation_from_distribution(random_distribution(rng, shape, support=3)))
            weight = Fraction(int(rng.integers(3, 9)), 8)
            w = WCoordinates.of([weight * a + (1 - weight) * b for a, b in zip(vertex, inner.as_tuple())])
            if bell_values(w).violated is None:
                continue
            drawn += 1
            p = correlation_from_w(w)
            cert = classical_membership(p)
            functional = cert.functional
            if (
                not cert.classical
                and functional is not None
                and functional.evaluate(p) > functional.bound
                and all(functional.evaluate(q) <= functional.bound for q in tables)
            ):
                separated += 1
        rows.append(
            ReproductionRow(
                "3x2: Bell-violating nonsignaling points are separated by a valid functional",
                f"{separated}/{drawn}",
                drawn > 0 and separated == drawn,
            )
        )
        return rows

    def two_input_symmetric(self) -> List[ReproductionRow]:
        accepted = 0
        for k, rng in enumerate(self._rngs(40, self.samples.two_input)):
            p = two_point_nonsignaling(random_two_point_data(rng, 2 + k % 3, symmetric=True))
            mu = two_input_decompose(p)
            if correlation_from_distribution(mu).same_as(p):
                accepted += 1
        rejected = 0
        for k, rng in enumerate(self._rngs(41, self.samples.two_input)):
            p = two_point_nonsignaling(random_two_point_data(rng, 2 + k % 2, symmetric=False))
            try:
                two_input_decompose(p)
            except NotSymmetric:
                if not classical_membership(p).classical:
                    rejected += 1
        return [
            ReproductionRow(
                "two inputs: symmetric synchronous nonsignaling correlations are classical",
                f"{accepted}/{self.samples.two_input}",
                accepted == self.samples.two_input,
            ),
            ReproductionRow(
                "two inputs: asymmetric ones are not",
                f"{rejected}/{self.samples.two_input}",
                rejected == self.samples.two_input,
            ),
        ]

    def schmidt_blocks(self) -> List[ReproductionRow]:
        worst = 0.0
        for rng in self._rngs(50, self.samples.blocks):
            families = [random_pvm_family(rng, int(rng.integers(1, 3)), 3, 2) for _ in range(2)]
            psi, alice, bob = block_strategy([0.75, 0.25], families)
            blocks = decompose_me(psi, alice, bob, self.settings.tol, self.settings.schmidt_split_gap)
            weights = sorted(blocks.weights, reverse=True)
            gap = max(abs(a - b) for a, b in itertools.zip_longest(weights, [0.75, 0.25], fillvalue=0.0))
            worst = max(worst, gap, blocks.residual)
        return [
            ReproductionRow(
                "pure synchronous strategies split into maximally entangled blocks (3/4, 1/4)",
                f"max weight or recombination error {worst:.1e}",
                worst <= 1e-9,
            )
        ]

    def polytope_census(self) -> List[ReproductionRow]:
        sync = census(GameShape(2, 2), nonsignaling=False, cap=self.settings.function_cap)
        ns = census(GameShape(3, 2), nonsignaling=True, cap=self.settings.function_cap)
        return [
            ReproductionRow(
                "2x2 synchronous polytope: deterministic tables are exactly the vertices",
                f"{sync.deterministic_count} tables, {sync.dd_count} vertices, dimension {sync.dimension}",
                sync.deterministic_count == sync.dd_count == 64,
            ),
            ReproductionRow(
                "3x2 nonsignaling polytope in full coordinates has 80 vertices",
                f"{ns.dd_count} vertices, dimension {ns.dimension}",
                ns.dd_count == 80,
            ),
        ]


def render_table(rows: List[ReproductionRow]) -> str:
    width = max(len(row.claim) for row in rows)
    lines = [f"{'claim':<{width}} | {'computed':<40} | result"]
    lines.append("-" * len(lines[0]))
    for row in rows:
        lines.append(f"{row.claim:<{width}} | {row.computed:<40} | {'pass' if row.passed else 'FAIL'}")
    return "\n".join(lines) + "\n"


def reproduce(
    seed: int,
    settings: Settings = DEFAULT_SETTINGS,
    only: Optional[Sequence[str]] = None,
    samples: SampleCounts = DEFAULT_SAMPLES,
) -> List[ReproductionRow]:
    """Run every check, or only the named ones in their fixed order."""
    reproduction = Reproduction(seed, settings, samples)
    checks = reproduction.checks()
    if only:
        known = {check.__name__ for check in checks}
        unknown = sorted(set(only) - known)
        if unknown:
            raise ValueOutOfRange(f"Unknown checks {unknown}. Known: {sorted(known)}")
        checks = [check for check in checks if check.__name__ in only]
    rows = []
    for check in checks:
        logger.info(f"reproducing {check.__name__}")
        rows.extend(reproduction.run_check(check))
    return rows
