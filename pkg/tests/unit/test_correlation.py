import tempfile
from fractions import Fraction
from pathlib import Path
from unittest import TestCase

from hypothesis import given, settings
from hypothesis import strategies as st

from syncorr.core.errors import (
    ColumnSumViolation,
    DimensionMismatch,
    ModeMismatch,
    NegativeEntry,
    ParseError,
    ShapeMismatch,
    ValueOutOfRange,
    WeightSumViolation,
)
from syncorr.core.types import GameShape, ScalarMode
from syncorr.core.utils import as_fraction, format_rational, parse_game, parse_rational
from syncorr.correlation.codec import (
    correlation_dumps,
    correlation_loads,
    dump_correlation,
    load_correlation,
)
from syncorr.correlation.correlation import (
    convex_combine,
    from_function,
    is_nonsignaling,
    is_symmetric,
    is_synchronous,
    uniform,
    validate_stochastic,
)
from syncorr.polytope.coordinates import TwoPointDomainData, two_point_nonsignaling, w_coordinates
from tests.unit.test_config import P0, P1, P0_EIGHTHS, SHAPE_3_2

SHAPE_2_2 = GameShape(2, 2)
HALF = Fraction(1, 2)


def function_mixtures(shape: GameShape):
    term = st.tuples(
        st.lists(st.integers(0, shape.m - 1), min_size=shape.n, max_size=shape.n),
        st.integers(1, 10),
    )
    return st.lists(term, min_size=1, max_size=5)


def mix(shape: GameShape, terms):
    total = sum(w for _, w in terms)
    return convex_combine([(Fraction(w, total), from_function(f, shape)) for f, w in terms])


class ScalarUtilsTest(TestCase):
    def test_parse_rational(self):
        self.assertEqual(parse_rational("3/8"), Fraction(3, 8))
        self.assertEqual(parse_rational(" -2 / 4 "), Fraction(-1, 2))
        self.assertEqual(parse_rational("5"), Fraction(5))
        with self.assertRaises(ParseError):
            parse_rational("0.5")
        with self.assertRaises(ParseError):
            parse_rational("1/0")

    def test_format_rational_lowest_terms(self):
        self.assertEqual(format_rational(Fraction(2, 4)), "1/2")
        self.assertEqual(format_rational(Fraction(4, 2)), "2")
        self.assertEqual(format_rational(Fraction(-3, 9)), "-1/3")

    def test_parse_game(self):
        self.assertEqual(parse_game("3x2"), GameShape(3, 2))
        self.assertEqual(parse_game("2X3"), GameShape(2, 3))
        with self.assertRaises(ParseError):
            parse_game("3-by-2")

    def test_float_is_never_made_rational(self):
        with self.assertRaises(ModeMismatch):
            as_fraction(0.5)

    def test_game_shape_positive(self):
        with self.assertRaises(ValueError):
            GameShape(0, 2)


class ValidateStochasticTest(TestCase):
    def test_identity_function_table(self):
        table = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
        p = validate_stochastic(table, SHAPE_2_2)
        self.assertEqual(p.mode, ScalarMode.RATIONAL)
        self.assertEqual(p.prob(0, 1, 0, 1), 1)

    def test_p0_accepted(self):
        p = P0()
        self.assertEqual(p.prob(0, 0, 0, 0), HALF)
        self.assertEqual(p.prob(0, 1, 0, 1), Fraction(3, 8))

    def test_negative_entry(self):
        table = [[Fraction(v, 8) for v in row] for row in P0_EIGHTHS]
        table[0][1] = Fraction(-1, 8)
        table[1][1] = Fraction(4, 8)
        with self.assertRaises(NegativeEntry) as cm:
            validate_stochastic(table, SHAPE_3_2)
        self.assertEqual(cm.exception.index, (0, 0, 0, 1))

    def test_column_sum(self):
        table = [[Fraction(v, 8) for v in row] for row in P0_EIGHTHS]
        table[3][4] = Fraction(5, 8)
        with self.assertRaises(ColumnSumViolation) as cm:
            validate_stochastic(table, SHAPE_3_2)
        self.assertEqual(cm.exception.column, 4)
        self.assertEqual(cm.exception.deviation, Fraction(1, 8))

    def test_dimensions(self):
        with self.assertRaises(DimensionMismatch):
            validate_stochastic([[1, 1, 1, 1]], SHAPE_2_2)

    def test_float_mode_clips_and_renormalizes(self):
        table = [[0.5, 1.0, 0.5, 0.5], [-1e-12, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0], [0.5 + 1e-12, 0.0, 0.5, 0.5]]
        p = validate_stochastic(table, SHAPE_2_2)
        self.assertEqual(p.mode, ScalarMode.FLOAT)
        self.assertGreaterEqual(p.entries.min(), 0.0)
        self.assertAlmostEqual(float(p.entries[:, 0].sum()), 1.0, places=12)
        with self.assertRaises(NegativeEntry):
            validate_stochastic([[1.0, 1.0, 1.0, 1.0 + 1e-3], [0.0] * 4, [0.0] * 4, [0.0, 0.0, 0.0, -1e-3]], SHAPE_2_2)

    def test_entries_are_read_only(self):
        p = P0()
        with self.assertRaises(ValueError):
            p.entries[0, 0] = Fraction(0)


class PredicatesTest(TestCase):
    def test_functions_are_synchronous_nonsignaling_symmetric(self):
        for f in ([0, 0], [0, 1], [1, 0], [1, 1]):
            p = from_function(f, SHAPE_2_2)
            self.assertTrue(is_synchronous(p))
            self.assertTrue(is_nonsignaling(p))
            self.assertTrue(is_symmetric(p))

    def test_p0(self):
        p = P0()
        self.assertTrue(is_synchronous(p))
        self.assertTrue(is_nonsignaling(p))
        self.assertTrue(is_symmetric(p))
        self.assertTrue(is_symmetric(P1()))

    def test_uniform_is_not_synchronous(self):
        check = is_synchronous(uniform(SHAPE_2_2))
        self.assertFalse(check)
        self.assertIn((0, 0, 1), check.offenders)
        self.assertEqual(check.max_deviation, 0.25)

    def test_signaling_table(self):
        table = [
            [1, 0, HALF, HALF],
            [0, 0, 0, 0],
            [0, 0, 0, 0],
            [0, 1, HALF, HALF],
        ]
        p = validate_stochastic(table, SHAPE_2_2)
        self.assertTrue(is_synchronous(p))
        check = is_nonsignaling(p)
        self.assertFalse(check)
        self.assertIsNone(check.marginal_a)
        self.assertEqual(check.max_deviation, 1.0)

    def test_marginals(self):
        check = is_nonsignaling(from_function([0, 1], SHAPE_2_2))
        self.assertEqual(check.marginal_a.values[0, 0], 1)
        self.assertEqual(check.marginal_a.values[1, 1], 1)
        self.assertEqual(check.marginal_b.values[0, 1], 0)

    def test_two_point_construction_without_symmetry(self):
        u = [[Fraction(1, 4)] * 2] * 2
        v = [[HALF, 0], [0, HALF]]
        p = two_point_nonsignaling(TwoPointDomainData.build(u, v))
        self.assertTrue(is_synchronous(p))
        self.assertTrue(is_nonsignaling(p))
        self.assertFalse(is_symmetric(p))

    def test_degenerate_shapes(self):
        p = from_function([0, 0, 0], GameShape(3, 1))
        self.assertTrue(is_synchronous(p))
        self.assertTrue(is_nonsignaling(p))
        self.assertTrue(is_symmetric(p))

    @settings(max_examples=40, deadline=None)
    @given(function_mixtures(SHAPE_3_2))
    def test_mixtures_keep_all_three(self, terms):
        p = mix(SHAPE_3_2, terms)
        self.assertTrue(is_synchronous(p))
        self.assertTrue(is_nonsignaling(p))
        self.assertTrue(is_symmetric(p))

    @settings(max_examples=40, deadline=None)
    @given(function_mixtures(GameShape(2, 3)))
    def test_float_predicates_agree(self, terms):
        p = mix(GameShape(2, 3), terms)
        q = p.to_float()
        self.assertTrue(q.lossy)
        self.assertEqual(bool(is_synchronous(p)), bool(is_synchronous(q)))
        self.assertEqual(bool(is_nonsignaling(p)), bool(is_nonsignaling(q)))
        self.assertEqual(is_symmetric(p), is_symmetric(q))


class ConstructorsTest(TestCase):
    def test_constant_function(self):
        p = from_function([0, 0], SHAPE_2_2)
        for column in range(4):
            self.assertEqual(list(p.entries[:, column]), [1, 0, 0, 0])

    def test_identity_function(self):
        self.assertEqual(from_function([0, 1], SHAPE_2_2).prob(0, 1, 0, 1), 1)

    def test_out_of_range(self):
        with self.assertRaises(ValueOutOfRange):
            from_function([0, 2], SHAPE_2_2)
        with self.assertRaises(DimensionMismatch):
            from_function([0], SHAPE_2_2)

    def test_combine_single(self):
        p = P0()
        self.assertTrue(convex_combine([(1, p)]).same_as(p))

    def test_combine_halves(self):
        p = convex_combine([(HALF, from_function([0, 1], SHAPE_2_2)), (HALF, from_function([1, 1], SHAPE_2_2))])
        self.assertTrue(set(p.entries.flat) <= {0, HALF, 1})
        self.assertEqual(p.prob(1, 1, 1, 1), 1)
        self.assertEqual(p.prob(0, 1, 0, 1), HALF)

    def test_uniform_mixture_of_functions(self):
        terms = [(Fraction(1, 8), from_function(f, SHAPE_3_2)) for f in _all_functions(3, 2)]
        w = w_coordinates(convex_combine(terms))
        q = Fraction(1, 4)
        self.assertEqual(w.as_tuple(), (HALF, q, q, q, HALF, q, q, q, HALF))

    def test_combine_errors(self):
        f = from_function([0, 1], SHAPE_2_2)
        with self.assertRaises(WeightSumViolation):
            convex_combine([(HALF, f)])
        with self.assertRaises(WeightSumViolation):
            convex_combine([(Fraction(3, 2), f), (-HALF, f)])
        with self.assertRaises(ShapeMismatch):
            convex_combine([(HALF, f), (HALF, from_function([0, 1, 1], SHAPE_3_2))])
        with self.assertRaises(ModeMismatch):
            convex_combine([(HALF, f), (HALF, f.to_float())])


def _all_functions(n, m):
    if n == 0:
        return [[]]
    return [[y] + rest for y in range(m) for rest in _all_functions(n - 1, m)]


class CodecTest(TestCase):
    def test_rational_round_trip_is_byte_identical(self):
        text = correlation_dumps(P0())
        self.assertIn('"1/8"', text)
        self.assertEqual(correlation_dumps(correlation_loads(text)), text)

    def test_float_document(self):
        text = correlation_dumps(P0().to_float())
        q = correlation_loads(text)
        self.assertEqual(q.mode, ScalarMode.FLOAT)
        self.assertTrue(q.same_as(P0(), tol=1e-15))

    def test_float_in_rational_document(self):
        text = '{"n": 1, "m": 1, "mode": "rational", "entries": [[1.0]]}'
        with self.assertRaises(ParseError):
            correlation_loads(text)

    def test_malformed(self):
        with self.assertRaises(ParseError):
            correlation_loads("{")
        with self.assertRaises(ParseError):
            correlation_loads('{"n": 2}')

    def test_malformed_entries(self):
        for text in (
            '{"n": 1, "m": 1, "mode": "rational", "entries": 5}',
            '{"n": 1, "m": 1, "mode": "rational", "entries": [5]}',
            '{"n": 1, "m": 2, "mode": "float", "entries": [[null], [0.5], [0.5], [0]]}',
            '{"n": 1, "m": 2, "mode": "float", "entries": [[{}], [0.5], [0.5], [0]]}',
            '{"n": 1, "m": 1, "mode": "float", "entries": [[true]]}',
        ):
            with self.assertRaises(ParseError):
                correlation_loads(text)

    def test_non_integral_sizes(self):
        entries = '[["1/2"], ["0"], ["0"], ["1/2"]]'
        for n in ("1.7", "true", '"1"'):
            with self.assertRaises(ParseError):
                correlation_loads(f'{{"n": {n}, "m": 2, "mode": "rational", "entries": {entries}}}')
        p = correlation_loads(f'{{"n": 1.0, "m": 2, "mode": "rational", "entries": {entries}}}')
        self.assertEqual(p.shape, GameShape(1, 2))

    def test_file_round_trip(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "p0.json"
            dump_correlation(P0(), path)
            self.assertTrue(load_correlation(path).same_as(P0()))
