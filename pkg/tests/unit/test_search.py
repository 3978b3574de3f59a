import math
from fractions import Fraction
from unittest import TestCase

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from syncorr.core.types import BellFunctional
from syncorr.correlation.correlation import distance
from syncorr.polytope.bell import bell_values
from syncorr.polytope.coordinates import w_coordinates
from syncorr.quantum.strategies import correlation_me
from syncorr.search.bloch import (
    TWO_PI,
    BlochAngles,
    SumDiffAngles,
    canonical_angle,
    j_closed_form,
    qubit_pvms,
    target_values,
    w_closed_form,
)
from syncorr.search.minimize import BlochSearch, minimize
from syncorr.search.saturators import known_j0_argmins, reference_saturators
from tests.unit.test_config import P0

angle = st.floats(min_value=-TWO_PI, max_value=TWO_PI, allow_nan=False, allow_infinity=False)


class BlochTest(TestCase):
    def test_canonical_angle(self):
        self.assertEqual(canonical_angle(0.0), 0.0)
        self.assertEqual(canonical_angle(TWO_PI), 0.0)
        self.assertAlmostEqual(canonical_angle(-math.pi / 3), 5 * math.pi / 3)
        self.assertAlmostEqual(canonical_angle(5 * math.pi), math.pi)

    def test_coordinate_change(self):
        a = BlochAngles(0.3, -1.1, 0.2, 0.9)
        b = a.to_sum_diff().to_bloch()
        self.assertAlmostEqual(b.alpha, 0.3)
        self.assertAlmostEqual(b.gamma, -1.1)
        self.assertAlmostEqual(b.delta - b.beta, 0.7)

    @settings(max_examples=50, deadline=None)
    @given(angle, angle, angle, angle)
    def test_w_closed_form_matches_traces(self, alpha, gamma, beta, delta):
        a = BlochAngles(alpha, gamma, beta, delta)
        numeric = w_coordinates(correlation_me(qubit_pvms(a)))
        np.testing.assert_allclose(w_closed_form(a).values, numeric.values, atol=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(angle, angle, angle, angle)
    def test_bell_closed_forms_agree(self, alpha, gamma, beta, delta):
        a = BlochAngles(alpha, gamma, beta, delta)
        expected = bell_values(w_closed_form(a)).deficits()
        np.testing.assert_allclose(j_closed_form(a).deficits(), expected, atol=1e-12)
        np.testing.assert_allclose(j_closed_form(a.to_sum_diff()).deficits(), expected, atol=1e-12)

    def test_only_the_relative_phase_matters(self):
        a = BlochAngles(0.4, 1.3, 0.0, 0.5)
        b = BlochAngles(0.4, 1.3, 2.0, 2.5)
        np.testing.assert_allclose(
            w_coordinates(correlation_me(qubit_pvms(a))).values,
            w_coordinates(correlation_me(qubit_pvms(b))).values,
            atol=1e-12,
        )

    def test_lower_bound_on_grid(self):
        axis = np.linspace(0, TWO_PI, 41)
        for target in BellFunctional:
            values = target_values(target, axis[:, None, None], axis[None, :, None], axis[None, None, :])
            self.assertGreaterEqual(values.min(), -0.125 - 1e-12)


class SaturatorsTest(TestCase):
    def test_reference_matrices(self):
        saturators = reference_saturators()
        self.assertEqual(sorted(saturators), list(BellFunctional))
        self.assertTrue(saturators[BellFunctional.J0].matrix.same_as(P0()))
        for functional, saturator in saturators.items():
            exact = bell_values(w_coordinates(saturator.matrix))
            self.assertEqual(exact.deficits()[functional], Fraction(-1, 8))
            self.assertEqual(exact.violated, functional)
            regenerated = correlation_me(qubit_pvms(saturator.angles))
            self.assertLess(distance(regenerated, saturator.matrix), 1e-12)

    def test_j0_argmins(self):
        argmins = known_j0_argmins()
        self.assertEqual(len(argmins), 8)
        for point in argmins:
            self.assertTrue(all(0 <= v < TWO_PI for v in point.as_tuple()))
            self.assertAlmostEqual(float(target_values(BellFunctional.J0, *point.as_tuple())), -0.125)
            self.assertLess(distance(correlation_me(qubit_pvms(point)), P0()), 1e-12)


class MinimizeTest(TestCase):
    def test_grid_too_coarse(self):
        with self.assertRaises(ValueError):
            BlochSearch(BellFunctional.J0, grid_steps=32)

    def test_j0(self):
        result = minimize(BellFunctional.J0, 64, 1e-10)
        self.assertAlmostEqual(result.min_value, -0.125, delta=1e-8)
        self.assertEqual(result.distinct_matrices, 1)
        self.assertLess(distance(result.canonical_matrix, P0()), 1e-7)
        for point in result.argmin:
            self.assertAlmostEqual(float(target_values(BellFunctional.J0, *point.as_tuple())), -0.125, delta=1e-8)
        data = result.to_dict()
        self.assertEqual(data["target"], "J0")
        self.assertEqual(data["grid_steps"], 64)

    def test_j1(self):
        result = minimize(BellFunctional.J1, 64, 1e-10)
        self.assertAlmostEqual(result.min_value, -0.125, delta=1e-8)
        self.assertEqual(result.distinct_matrices, 1)
        expected = reference_saturators()[BellFunctional.J1].matrix
        self.assertLess(distance(result.canonical_matrix, expected), 1e-7)

    def test_argmins_are_canonical(self):
        result = minimize(BellFunctional.J2, 64, 1e-10)
        for point in result.argmin:
            self.assertEqual(point, SumDiffAngles(*point.as_tuple()).canonical())

    def test_j2_and_j3_match_their_saturators(self):
        saturators = reference_saturators()
        for target in (BellFunctional.J2, BellFunctional.J3):
            result = minimize(target, 64, 1e-10)
            self.assertAlmostEqual(result.min_value, -0.125, delta=1e-8)
            self.assertEqual(result.distinct_matrices, 1)
            self.assertLess(distance(result.canonical_matrix, saturators[target].matrix), 1e-7)

    def test_j0_default_grid(self):
        result = minimize(BellFunctional.J0, 128, 1e-10)
        self.assertAlmostEqual(result.min_value, -0.125, delta=1e-8)
        self.assertEqual(result.distinct_matrices, 1)
        self.assertLess(distance(result.canonical_matrix, P0()), 1e-8)
        self.assertTrue(result.argmin)
