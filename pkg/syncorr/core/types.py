from dataclasses import dataclass
from enum import Enum, IntEnum
from fractions import Fraction
from typing import NewType, Tuple, Union

import numpy as np

Scalar = Union[Fraction, float]
ComplexMatrix = NewType("ComplexMatrix", np.ndarray)
RationalVector = Tuple[Fraction, ...]


class ScalarMode(Enum):
    RATIONAL = "rational"
    FLOAT = "float"


class Side(Enum):
    A = "A"
    B = "B"


class BellFunctional(IntEnum):
    J0 = 0
    J1 = 1
    J2 = 2
    J3 = 3

    @classmethod
    def from_label(cls, label: str) -> "BellFunctional":
        try:
            return cls[label.strip().upper()]
        except KeyError:
            raise ValueError(f"Unknown Bell functional: {label}")


class ExitCode(IntEnum):
    CLASSICAL = 0
    FAILURE = 1
    INVALID_INPUT = 2
    NONCLASSICAL = 10
    SIGNALING = 11


@dataclass(frozen=True)
class GameShape:
    """Sizes of the input set X (``n``) and the output set Y (``m``)."""

    n: int
    m: int

    def __post_init__(self):
        if not isinstance(self.n, int) or not isinstance(self.m, int):
            raise TypeError(f"Game shape must be integral. Got: ({self.n}, {self.m})")
        if self.n < 1 or self.m < 1:
            raise ValueError(f"Game shape must be positive. Got: ({self.n}, {self.m})")

    @property
    def rows(self) -> int:
        return self.m * self.m

    @property
    def columns(self) -> int:
        return self.n * self.n

    def row_index(self, y_a: int, y_b: int) -> int:
        return self.m * y_a + y_b

    def column_index(self, x_a: int, x_b: int) -> int:
        return self.n * x_a + x_b

    @property
    def label(self) -> str:
        return f"{self.n}x{self.m}"
