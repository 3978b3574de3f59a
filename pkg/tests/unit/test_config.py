import os
from fractions import Fraction
from unittest import TestCase, mock

from syncorr.core.config import FUNCTION_CAP_ENV, TOL_ENV, Settings
from syncorr.core.types import GameShape, ScalarMode
from syncorr.correlation.correlation import Correlation, validate_stochastic

SHAPE_3_2 = GameShape(3, 2)

P0_EIGHTHS = [
    [4, 1, 1, 1, 4, 1, 1, 1, 4],
    [0, 3, 3, 3, 0, 3, 3, 3, 0],
    [0, 3, 3, 3, 0, 3, 3, 3, 0],
    [4, 1, 1, 1, 4, 1, 1, 1, 4],
]
P1_EIGHTHS = [
    [4, 3, 3, 3, 4, 1, 3, 1, 4],
    [0, 1, 1, 1, 0, 3, 1, 3, 0],
    [0, 1, 1, 1, 0, 3, 1, 3, 0],
    [4, 3, 3, 3, 4, 1, 3, 1, 4],
]
P2_EIGHTHS = [
    [4, 3, 1, 3, 4, 3, 1, 3, 4],
    [0, 1, 3, 1, 0, 1, 3, 1, 0],
    [0, 1, 3, 1, 0, 1, 3, 1, 0],
    [4, 3, 1, 3, 4, 3, 1, 3, 4],
]
P3_EIGHTHS = [
    [4, 1, 3, 1, 4, 3, 3, 3, 4],
    [0, 3, 1, 3, 0, 1, 1, 1, 0],
    [0, 3, 1, 3, 0, 1, 1, 1, 0],
    [4, 1, 3, 1, 4, 3, 3, 3, 4],
]


def eighths(rows) -> Correlation:
    table = [[Fraction(v, 8) for v in row] for row in rows]
    return validate_stochastic(table, SHAPE_3_2, mode=ScalarMode.RATIONAL)


def P0() -> Correlation:
    return eighths(P0_EIGHTHS)


def P1() -> Correlation:
    return eighths(P1_EIGHTHS)


class SettingsTest(TestCase):
    def test_defaults(self):
        settings = Settings()
        self.assertEqual(settings.tol, 1e-9)
        self.assertEqual(settings.function_cap, 2**16)
        self.assertEqual(settings.grid_steps, 128)

    def test_tolerance_from_env(self):
        with mock.patch.dict(os.environ, {TOL_ENV: "1e-6"}):
            self.assertEqual(Settings.from_env().tol, 1e-6)

    def test_cap_from_env(self):
        with mock.patch.dict(os.environ, {FUNCTION_CAP_ENV: "100"}):
            self.assertEqual(Settings.from_env().function_cap, 100)

    def test_unset_env_keeps_defaults(self):
        with mock.patch.dict(os.environ, {}, clear=True):
            self.assertEqual(Settings.from_env(), Settings())

    def test_bad_tolerance(self):
        with mock.patch.dict(os.environ, {TOL_ENV: "tiny"}):
            with self.assertRaises(ValueError):
                Settings.from_env()
        with mock.patch.dict(os.environ, {TOL_ENV: "-1"}):
            with self.assertRaises(ValueError):
                Settings.from_env()
