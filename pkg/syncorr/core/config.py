import os
from dataclasses import dataclass, replace

TOL_ENV = "SYNCORR_TOL"
FUNCTION_CAP_ENV = "SYNCORR_FUNCTION_CAP"


@dataclass(frozen=True)
class Settings:
    tol: float = 1e-9
    function_cap: int = 2**16
    schmidt_split_gap: float = 1e-5
    grid_steps: int = 128
    refine_tol: float = 1e-10

    @classmethod
    def from_env(cls) -> "Settings":
        settings = cls()
        tol = os.getenv(TOL_ENV, None)
        if tol is not None:
            try:
                value = float(tol)
            except ValueError:
                raise ValueError(f"Can't parse {TOL_ENV}={tol!r} as a float")
            if not value > 0:
                raise ValueError(f"{TOL_ENV} must be positive. Got: {value}")
            settings = replace(settings, tol=value)
        cap = os.getenv(FUNCTION_CAP_ENV, None)
        if cap is not None:
            try:
                settings = replace(settings, function_cap=int(cap))
            except ValueError:
                raise ValueError(f"Can't parse {FUNCTION_CAP_ENV}={cap!r} as an integer")
        return settings


DEFAULT_SETTINGS = Settings()
