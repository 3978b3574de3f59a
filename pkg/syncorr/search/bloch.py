import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from syncorr.core.types import BellFunctional, ScalarMode
from syncorr.polytope.bell import BellReport, report_from_values
from syncorr.polytope.coordinates import WCoordinates
from syncorr.quantum.pvm import PVMFamily, pvm_from_kets

TWO_PI = 2 * math.pi


def canonical_angle(value: float) -> float:
    """Reduce to ``[0, 2*pi)``."""
    reduced = math.fmod(value, TWO_PI)
    if reduced < 0:
        reduced += TWO_PI
    if reduced >= TWO_PI or reduced == 0:
        return 0.0
    return reduced


@dataclass(frozen=True)
class BlochAngles:
    """``|phi_1> = (cos alpha, e^{i beta} sin alpha)``, ``|phi_2> = (cos gamma, e^{i delta} sin gamma)``."""

    alpha: float
    gamma: float
    beta: float = 0.0
    delta: float = 0.0

    def to_sum_diff(self) -> "SumDiffAngles":
        return SumDiffAngles(self.alpha + self.gamma, self.alpha - self.gamma, self.delta - self.beta)

    def kets(self) -> Tuple[Tuple[complex, complex], ...]:
        return (
            (0j, 1 + 0j),
            (complex(math.cos(self.alpha)), np.exp(1j * self.beta) * math.sin(self.alpha)),
            (complex(math.cos(self.gamma)), np.exp(1j * self.delta) * math.sin(self.gamma)),
        )


@dataclass(frozen=True)
class SumDiffAngles:
    """``rho_ang = alpha + gamma`` and ``sigma_ang = alpha - gamma`` with the relative phase ``delta``."""

    rho_ang: float
    sigma_ang: float
    delta: float = 0.0

    def to_bloch(self) -> BlochAngles:
        return BlochAngles(
            (self.rho_ang + self.sigma_ang) / 2, (self.rho_ang - self.sigma_ang) / 2, 0.0, self.delta
        )

    def canonical(self) -> "SumDiffAngles":
        return SumDiffAngles(
            canonical_angle(self.rho_ang), canonical_angle(self.sigma_ang), canonical_angle(self.delta)
        )

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.rho_ang, self.sigma_ang, self.delta)


Angles = Union[BlochAngles, SumDiffAngles]


def qubit_pvms(a: Angles) -> PVMFamily:
    """``E^0_1 = |1><1|`` and ``E^x_1 = |phi_x><phi_x|`` for x = 1, 2."""
    if isinstance(a, SumDiffAngles):
        a = a.to_bloch()
    return pvm_from_kets(a.kets())


def w_closed_form(a: Angles) -> WCoordinates:
    if isinstance(a, SumDiffAngles):
        a = a.to_bloch()
    sa, ca = math.sin(a.alpha), math.cos(a.alpha)
    sg, cg = math.sin(a.gamma), math.cos(a.gamma)
    cross = ca * cg * sa * sg * math.cos(a.delta - a.beta)
    w1 = sa**2 / 2
    w2 = sg**2 / 2
    w5 = (ca**2 * cg**2 + sa**2 * sg**2 + 2 * cross) / 2
    values = [0.5, w1, w2, w1, 0.5, w5, w2, w5, 0.5]
    return WCoordinates(3, ScalarMode.FLOAT, np.array(values, dtype=np.float64))


def bloch_values(alpha, gamma, phase) -> Tuple:
    """``(1 - J0, J1, J2, J3)`` in Bloch coordinates; ``phase`` is ``delta - beta``. Broadcasts."""
    sa2, ca2 = np.sin(alpha) ** 2, np.cos(alpha) ** 2
    sg2, cg2 = np.sin(gamma) ** 2, np.cos(gamma) ** 2
    cross = np.cos(alpha) * np.cos(gamma) * np.sin(alpha) * np.sin(gamma) * np.cos(phase)
    return (cross + sa2 * sg2, cross + ca2 * cg2, ca2 * sg2 - cross, sa2 * cg2 - cross)


def sum_diff_values(rho, sigma, delta) -> Tuple:
    """``(1 - J0, J1, J2, J3)`` in sum/difference coordinates. Broadcasts."""
    cr, cs = np.cos(rho), np.cos(sigma)
    sr, ss = np.sin(rho), np.sin(sigma)
    cd = np.cos(delta)
    tilt = cd / 4 * (cs**2 - cr**2)
    even = (cs**2 + cr**2) / 4
    odd = (sr**2 + ss**2) / 4
    return (
        tilt + even - cr * cs / 2,
        tilt + even + cr * cs / 2,
        -tilt + odd - sr * ss / 2,
        -tilt + odd + sr * ss / 2,
    )


def target_values(target: BellFunctional, rho, sigma, delta):
    """The quantity bounded below by ``-1/8``: ``1 - J0`` for J0, ``Jk`` otherwise."""
    return sum_diff_values(rho, sigma, delta)[target]


def j_closed_form(a: Angles) -> BellReport:
    if isinstance(a, SumDiffAngles):
        deficits = sum_diff_values(a.rho_ang, a.sigma_ang, a.delta)
    else:
        deficits = bloch_values(a.alpha, a.gamma, a.delta - a.beta)
    one_minus_j0, j1, j2, j3 = (float(v) for v in deficits)
    return report_from_values((1 - one_minus_j0, j1, j2, j3), ScalarMode.FLOAT)
