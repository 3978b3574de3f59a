from typing import Any, Optional, Sequence, Tuple


class SyncorrError(ValueError):
    """Root of every validation error raised by the library."""


class ParseError(SyncorrError):
    pass


class DimensionMismatch(SyncorrError):
    def __init__(self, expected: Tuple[int, ...], got: Tuple[int, ...]):
        self.expected = expected
        self.got = got
        super().__init__(f"Expected dimensions {expected}, got {got}")


class NegativeEntry(SyncorrError):
    def __init__(self, index: Tuple[int, ...], value: Any):
        self.index = index
        self.value = value
        super().__init__(f"Negative entry {value} at (yA, yB, xA, xB) = {index}")


class ColumnSumViolation(SyncorrError):
    def __init__(self, column: int, deviation: Any):
        self.column = column
        self.deviation = deviation
        super().__init__(f"Column {column} sums to 1 + ({deviation})")


class ValueOutOfRange(SyncorrError):
    pass


class WeightSumViolation(SyncorrError):
    def __init__(self, total: Any):
        self.total = total
        super().__init__(f"Weights must be nonnegative and sum to 1. Got sum: {total}")


class ShapeMismatch(SyncorrError):
    pass


class ModeMismatch(SyncorrError):
    pass


class CapExceeded(SyncorrError):
    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(f"{count} functions exceed the configured cap of {cap}")


class NotSynchronous(SyncorrError):
    def __init__(self, offenders: Sequence[Tuple[int, int, int]] = (), deviation: Any = None):
        self.offenders = list(offenders)
        self.deviation = deviation
        super().__init__(
            f"Correlation is not synchronous; offending (x, yA, yB): {self.offenders[:8]}"
        )


class NotSymmetric(SyncorrError):
    pass


class NotNonsignaling(SyncorrError):
    pass


class Unbounded(SyncorrError):
    def __init__(self, ray: Sequence[Any]):
        self.ray = tuple(ray)
        super().__init__(f"Polyhedron is unbounded along {self.ray}")


class Infeasible(SyncorrError):
    pass


class EmptyPolytope(SyncorrError):
    pass


class ConditionViolated(SyncorrError):
    """``which`` is 0 for nonnegativity, else the number of the two-point-range condition."""

    def __init__(self, which: int, indices: Tuple[int, ...]):
        self.which = which
        self.indices = indices
        super().__init__(f"Condition {which} violated at (xA, xB) = {indices}")


class MarginalMismatch(SyncorrError):
    def __init__(self, which: int, y: int):
        self.which = which
        self.y = y
        super().__init__(f"Marginal compatibility condition {which} fails at y = {y}")


class NotHermitian(SyncorrError):
    def __init__(self, maxdev: float, location: Optional[Tuple[int, int]] = None):
        self.maxdev = maxdev
        self.location = location
        super().__init__(f"Operator {location} is not Hermitian (max deviation {maxdev:.3e})")


class NotIdempotent(SyncorrError):
    def __init__(self, maxdev: float, location: Optional[Tuple[int, int]] = None):
        self.maxdev = maxdev
        self.location = location
        super().__init__(f"Operator {location} is not a projector (max deviation {maxdev:.3e})")


class NotComplete(SyncorrError):
    def __init__(self, maxdev: float, x: Optional[int] = None):
        self.maxdev = maxdev
        self.x = x
        super().__init__(f"Measurement {x} does not sum to identity (max deviation {maxdev:.3e})")


class NotPositive(SyncorrError):
    def __init__(self, min_eigenvalue: float, location: Optional[Tuple[int, int]] = None):
        self.min_eigenvalue = min_eigenvalue
        self.location = location
        super().__init__(f"Operator {location} has eigenvalue {min_eigenvalue:.3e} < 0")


class InvalidState(SyncorrError):
    pass


class ImaginaryResidual(SyncorrError):
    def __init__(self, maxdev: float):
        self.maxdev = maxdev
        super().__init__(f"Traces carry an imaginary residual of {maxdev:.3e}")


class NotNormalized(SyncorrError):
    def __init__(self, norm: float):
        self.norm = norm
        super().__init__(f"State vector has norm {norm!r}, expected 1")


class CommutationViolation(SyncorrError):
    def __init__(self, maxdev: float, side: str = ""):
        self.maxdev = maxdev
        self.side = side
        super().__init__(
            f"Measurement operators on side {side} do not commute with the reduced state "
            f"(max deviation {maxdev:.3e})"
        )


class DegenerateGap(SyncorrError):
    def __init__(self, gap: float, index: int):
        self.gap = gap
        self.index = index
        super().__init__(
            f"Schmidt coefficients {index} and {index + 1} differ by {gap:.3e}, too close to split reliably"
        )


class OutcomeCountNotTwo(SyncorrError):
    def __init__(self, m: int):
        self.m = m
        super().__init__(f"Observable traces need two outcomes, got {m}")


class CertificateMismatch(SyncorrError):
    def __init__(self, dev: float):
        self.dev = dev
        super().__init__(f"Trace certificate deviates from the Bell functional by {dev:.3e}")
