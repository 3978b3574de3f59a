import itertools
from fractions import Fraction
from unittest import TestCase

import numpy as np

from syncorr.classical.functions import enumerate_functions
from syncorr.classical.membership import classical_membership
from syncorr.core.errors import (
    ConditionViolated,
    EmptyPolytope,
    Infeasible,
    MarginalMismatch,
    ParseError,
    ShapeMismatch,
    Unbounded,
    ValueOutOfRange,
)
from syncorr.core.types import BellFunctional, GameShape
from syncorr.correlation.correlation import (
    from_function,
    is_nonsignaling,
    is_symmetric,
    is_synchronous,
)
from syncorr.polytope.bell import bell_values, ns_vertex_classification
from syncorr.polytope.census import census, deterministic_sync_tables
from syncorr.polytope.coordinates import (
    TwoPointDomainData,
    WCoordinates,
    correlation_from_w,
    two_point_classical,
    two_point_nonsignaling,
    w_coordinates,
)
from syncorr.polytope.double_description import (
    HPolytope,
    VPolytope,
    affine_dimension,
    contains,
    dd_enumerate,
    facet_enumerate,
)
from syncorr.polytope.polytopes import (
    classical_polytope_3_2,
    parse_constraint,
    polytope_from_text,
    sync_ns_polytope_3_2,
    sync_ns_polytope_w,
)
from tests.unit.test_config import P0, P1, SHAPE_3_2

HALF = Fraction(1, 2)
EIGHTH = Fraction(1, 8)


def cube(dim: int) -> HPolytope:
    inequalities = []
    for k in range(dim):
        unit = [0] * dim
        unit[k] = 1
        inequalities.append((tuple(unit), 1))
        inequalities.append((tuple(-v for v in unit), 0))
    return HPolytope(dim, tuple(inequalities))


def function_ws():
    return {w_coordinates(from_function(f.values, SHAPE_3_2)).as_tuple() for f in enumerate_functions(SHAPE_3_2)}


class DoubleDescriptionTest(TestCase):
    def test_cube(self):
        v = dd_enumerate(cube(3))
        self.assertEqual(len(v), 8)
        self.assertEqual(set(v.vertices), set(itertools.product((0, 1), repeat=3)))
        self.assertEqual(affine_dimension(v), 3)

    def test_sorted_output(self):
        v = dd_enumerate(cube(2))
        self.assertEqual(list(v.vertices), sorted(v.vertices))

    def test_equations_are_eliminated(self):
        h = HPolytope(2, cube(2).inequalities, (((1, -1), 0),))
        v = dd_enumerate(h)
        self.assertEqual(v.vertices, ((0, 0), (1, 1)))
        self.assertEqual(affine_dimension(v), 1)

    def test_single_point(self):
        h = HPolytope(2, (((1, 0), 1),), (((1, 0), HALF), ((0, 1), Fraction(1, 3))))
        v = dd_enumerate(h)
        self.assertEqual(v.vertices, ((HALF, Fraction(1, 3)),))
        self.assertEqual(affine_dimension(v), 0)

    def test_unbounded(self):
        with self.assertRaises(Unbounded):
            dd_enumerate(HPolytope(1, (((-1,), 0),)))
        with self.assertRaises(Unbounded):
            dd_enumerate(HPolytope(2, (((-1, 0), 0),)))

    def test_infeasible(self):
        with self.assertRaises(Infeasible):
            dd_enumerate(HPolytope(1, (((-1,), 0), ((1,), -1))))
        with self.assertRaises(Infeasible):
            dd_enumerate(HPolytope(2, cube(2).inequalities, (((1, 0), 1), ((1, 0), 2))))
        with self.assertRaises(Infeasible):
            HPolytope(2, (((0, 0), -1),))

    def test_empty_vertex_set(self):
        with self.assertRaises(EmptyPolytope):
            affine_dimension(VPolytope(2, ()))

    def test_facets_of_square(self):
        h = facet_enumerate(VPolytope(2, ((0, 0), (1, 0), (0, 1), (1, 1))))
        self.assertEqual(len(h.inequalities), 4)
        self.assertEqual(h.equations, ())
        self.assertTrue(h.contains((HALF, HALF)))
        self.assertFalse(h.contains((2, 0)))

    def test_facets_of_segment_in_plane(self):
        h = facet_enumerate(VPolytope(2, ((0, 0), (2, 2))))
        self.assertEqual(len(h.equations), 1)
        self.assertEqual(dd_enumerate(h).vertices, ((0, 0), (2, 2)))

    def test_dict_round_trips(self):
        h = sync_ns_polytope_3_2()
        self.assertEqual(HPolytope.from_dict(h.to_dict()), h)
        v = VPolytope(2, ((HALF, 0), (0, 1)))
        self.assertEqual(v.to_dict()["vertices"], [["0", "1"], ["1/2", "0"]])
        self.assertEqual(VPolytope.from_dict(v.to_dict()), v)
        with self.assertRaises(ParseError):
            HPolytope.from_dict({"inequalities": []})


class ConstraintParsingTest(TestCase):
    def test_parse(self):
        op, a, b = parse_constraint("w0 + w4 <= 1 + w1", 9)
        self.assertEqual(op, "<=")
        self.assertEqual(a, (1, -1, 0, 0, 1, 0, 0, 0, 0))
        self.assertEqual(b, 1)

    def test_greater_equal_is_normalized(self):
        op, a, b = parse_constraint("w0 - w3 - w6 + w7 >= 0", 9)
        self.assertEqual(op, "<=")
        self.assertEqual(a, (-1, 0, 0, 1, 0, 0, 1, -1, 0))
        self.assertEqual(b, 0)

    def test_coefficients_and_equations(self):
        op, a, b = parse_constraint("2*w1 - 1/2 w0 = 3/4", 2)
        self.assertEqual(op, "=")
        self.assertEqual(a, (-HALF, 2))
        self.assertEqual(b, Fraction(3, 4))

    def test_errors(self):
        with self.assertRaises(ParseError):
            parse_constraint("w0 < 1", 9)
        with self.assertRaises(ParseError):
            parse_constraint("x0 <= 1", 9)
        with self.assertRaises(ValueOutOfRange):
            parse_constraint("w9 <= 1", 9)


class SynchronousPolytopesTest(TestCase):
    @classmethod
    def setUpClass(cls):
        cls.ns_vertices = dd_enumerate(sync_ns_polytope_3_2())
        cls.classical_vertices = dd_enumerate(classical_polytope_3_2())

    def test_ns_polytope(self):
        h = sync_ns_polytope_3_2()
        self.assertEqual(len(h.inequalities), 24)
        self.assertEqual(len(self.ns_vertices), 80)
        self.assertEqual(affine_dimension(self.ns_vertices), 9)
        self.assertIn((1,) * 9, self.ns_vertices)
        for w in function_ws():
            self.assertTrue(h.contains(w))

    def test_ns_vertices_are_correlations(self):
        for vertex in self.ns_vertices.vertices:
            p = correlation_from_w(WCoordinates.of(vertex))
            self.assertTrue(is_synchronous(p))
            self.assertTrue(is_nonsignaling(p))
            self.assertEqual(w_coordinates(p).as_tuple(), vertex)

    def test_classical_polytope(self):
        self.assertEqual(set(self.classical_vertices.vertices), function_ws())
        self.assertEqual(affine_dimension(self.classical_vertices), 6)
        h = classical_polytope_3_2()
        self.assertFalse(h.contains(w_coordinates(P0()).as_tuple()))
        self.assertTrue(h.contains((HALF,) * 9))

    def test_facet_round_trip(self):
        for v in (self.classical_vertices, self.ns_vertices):
            h = facet_enumerate(v)
            self.assertTrue(contains(v, h))
            self.assertEqual(dd_enumerate(h).vertices, v.vertices)

    def test_polytope_for_any_question_count(self):
        self.assertEqual(
            set(sync_ns_polytope_w(3).inequalities), set(sync_ns_polytope_3_2().inequalities)
        )
        self.assertEqual(dd_enumerate(sync_ns_polytope_w(1)).vertices, ((0,), (1,)))
        for vertex in dd_enumerate(sync_ns_polytope_w(2)).vertices:
            p = correlation_from_w(WCoordinates.of(vertex))
            self.assertTrue(is_nonsignaling(p))
        with self.assertRaises(ValueOutOfRange):
            sync_ns_polytope_w(0)

    def test_text_polytope(self):
        v = dd_enumerate(polytope_from_text(2, ["0 <= w0", "0 <= w1", "w0 + w1 <= 1"]))
        self.assertEqual(v.vertices, ((0, 0), (0, 1), (1, 0)))


class WCoordinatesTest(TestCase):
    def test_p0(self):
        w = w_coordinates(P0())
        self.assertEqual(w.as_tuple(), (HALF, EIGHTH, EIGHTH, EIGHTH, HALF, EIGHTH, EIGHTH, EIGHTH, HALF))
        self.assertEqual(w.at(2, 2), HALF)
        self.assertEqual(w.to_list()[1], "1/8")

    def test_zero(self):
        p = correlation_from_w(WCoordinates.of([0] * 9))
        self.assertTrue(p.same_as(from_function([0, 0, 0], SHAPE_3_2)))

    def test_conditions(self):
        cases = [
            (0, [0, -EIGHTH, 0, 0, 0, 0, 0, 0, 0]),
            (1, [0, HALF, 0, 0, 1, 0, 0, 0, 0]),
            (2, [1, HALF, 0, 0, 0, 0, 0, 0, 0]),
            (3, [1, 0, 0, 0, 1, 0, 0, 0, 0]),
        ]
        for which, values in cases:
            with self.assertRaises(ConditionViolated) as cm:
                correlation_from_w(WCoordinates.of(values))
            self.assertEqual(cm.exception.which, which)
            self.assertEqual(cm.exception.indices, (0, 1))

    def test_requires_two_outputs(self):
        with self.assertRaises(ShapeMismatch):
            w_coordinates(from_function([0, 2], GameShape(2, 3)))

    def test_random_round_trip(self):
        vertices = dd_enumerate(sync_ns_polytope_3_2()).vertices
        rng = np.random.default_rng(7)
        for _ in range(100):
            picks = rng.choice(len(vertices), size=3, replace=False)
            weights = rng.integers(1, 10, size=3)
            total = int(weights.sum())
            w = [
                sum(Fraction(int(c), total) * vertices[int(k)][i] for c, k in zip(weights, picks))
                for i in range(9)
            ]
            coordinates = WCoordinates.of(w)
            self.assertEqual(w_coordinates(correlation_from_w(coordinates)).as_tuple(), tuple(w))


class BellTest(TestCase):
    def test_p0(self):
        report = bell_values(w_coordinates(P0()))
        self.assertEqual((report.j0, report.j1, report.j2, report.j3), (Fraction(9, 8), Fraction(3, 8), Fraction(3, 8), Fraction(3, 8)))
        self.assertEqual(report.violated, BellFunctional.J0)
        self.assertEqual(report.magnitude, EIGHTH)
        self.assertEqual(report.to_dict()["J0"], "9/8")

    def test_p1(self):
        report = bell_values(w_coordinates(P1()))
        self.assertEqual(report.j1, -EIGHTH)
        self.assertEqual(report.violated, BellFunctional.J1)

    def test_function_vertices(self):
        for w in function_ws():
            report = bell_values(WCoordinates.of(w))
            self.assertIsNone(report.violated)
            self.assertEqual(report.magnitude, 0)

    def test_affine(self):
        vertices = dd_enumerate(sync_ns_polytope_3_2()).vertices
        rng = np.random.default_rng(13)
        for _ in range(50):
            a, b = (vertices[int(k)] for k in rng.choice(len(vertices), size=2, replace=False))
            lam = Fraction(int(rng.integers(0, 9)), 8)
            mixed = bell_values(WCoordinates.of([lam * x + (1 - lam) * y for x, y in zip(a, b)]))
            left, right = bell_values(WCoordinates.of(a)), bell_values(WCoordinates.of(b))
            for j in BellFunctional:
                self.assertEqual(mixed.value(j), lam * left.value(j) + (1 - lam) * right.value(j))

    def test_three_inputs_only(self):
        with self.assertRaises(ShapeMismatch):
            bell_values(WCoordinates.of([0, 0, 0, 0]))


class VertexClassificationTest(TestCase):
    @classmethod
    def setUpClass(cls):
        cls.result = ns_vertex_classification()

    def test_counts(self):
        self.assertEqual(self.result.violating_count, 32)
        self.assertEqual([len(self.result.violating[j]) for j in BellFunctional], [8, 8, 8, 8])
        self.assertEqual(len(self.result.non_violating), 48)
        self.assertEqual(self.result.max_violation, HALF)

    def test_patterns(self):
        patterns = self.result.patterns()
        for j in BellFunctional:
            expected = [HALF] * 4
            expected[j] = -HALF
            self.assertEqual(patterns[j], [tuple(expected)])

    def test_at_most_one_violation_on_mixtures(self):
        vertices = self.result.vertices.vertices
        rng = np.random.default_rng(19)
        for _ in range(300):
            picks = rng.choice(len(vertices), size=4, replace=False)
            weights = rng.integers(1, 6, size=4)
            total = int(weights.sum())
            w = [
                sum(Fraction(int(c), total) * vertices[int(k)][i] for c, k in zip(weights, picks))
                for i in range(9)
            ]
            self.assertLessEqual(len(bell_values(WCoordinates.of(w)).violations), 1)


class TwoPointTest(TestCase):
    def test_constant_function(self):
        point = [[1, 0], [0, 0]]
        p = two_point_nonsignaling(TwoPointDomainData.build(point, point))
        self.assertTrue(p.same_as(from_function([0, 0], GameShape(2, 2))))

    def test_uniform_is_classical(self):
        u = [[Fraction(1, 4)] * 2] * 2
        p = two_point_nonsignaling(TwoPointDomainData.build(u, u))
        self.assertTrue(is_symmetric(p))
        self.assertTrue(classical_membership(p).classical)
        self.assertTrue(classical_membership(two_point_classical(u)).classical)

    def test_asymmetric_is_not_classical(self):
        data = TwoPointDomainData.build([[Fraction(1, 4)] * 2] * 2, [[HALF, 0], [0, HALF]])
        self.assertFalse(data.symmetric)
        p = two_point_nonsignaling(data)
        self.assertTrue(is_synchronous(p))
        self.assertTrue(is_nonsignaling(p))
        self.assertFalse(is_symmetric(p))
        self.assertFalse(classical_membership(p).classical)

    def test_marginal_mismatch(self):
        with self.assertRaises(MarginalMismatch) as cm:
            TwoPointDomainData.build([[0, 1], [0, 0]], [[0, 1], [0, 0]])
        self.assertEqual(cm.exception.which, 1)
        with self.assertRaises(ValueError):
            TwoPointDomainData.build([[HALF, 0], [0, 0]])


class CensusTest(TestCase):
    def test_two_by_two(self):
        self.assertEqual(len(deterministic_sync_tables(GameShape(2, 2))), 64)
        entry = census(GameShape(2, 2), nonsignaling=False)
        self.assertEqual(entry.deterministic_count, 64)
        self.assertEqual(entry.dd_count, 64)
        self.assertEqual(entry.dimension, 8)
        self.assertEqual(entry.to_dict()["game"], "2x2")

    def test_full_coordinates_match_w_coordinates(self):
        entry = census(SHAPE_3_2, nonsignaling=True)
        self.assertEqual(entry.dd_count, 80)
        self.assertEqual(entry.dimension, 9)
