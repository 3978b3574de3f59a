import hashlib
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from syncorr.classical.membership import ClassicalCertificate, classical_membership
from syncorr.core.config import DEFAULT_SETTINGS, Settings
from syncorr.core.types import ExitCode
from syncorr.correlation.codec import correlation_loads
from syncorr.correlation.correlation import (
    Correlation,
    is_nonsignaling,
    is_symmetric,
    is_synchronous,
)
from syncorr.polytope.bell import BellReport, bell_values
from syncorr.polytope.coordinates import w_coordinates


@dataclass(frozen=True)
class Verdicts:
    stochastic: bool
    synchronous: bool
    nonsignaling: bool
    symmetric: bool
    classical: Optional[bool]

    def __post_init__(self):
        if self.classical and not (self.synchronous and self.nonsignaling and self.symmetric):
            raise RuntimeError(f"Inconsistent verdicts: {self}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "stochastic": self.stochastic,
            "synchronous": self.synchronous,
            "nonsignaling": self.nonsignaling,
            "symmetric": self.symmetric,
            "classical": self.classical,
        }


@dataclass(frozen=True, eq=False)
class Report:
    digest: str
    correlation: Correlation
    verdicts: Verdicts
    bell: Optional[BellReport] = None
    certificate: Optional[ClassicalCertificate] = None
    notes: List[str] = field(default_factory=list)

    @property
    def exit_code(self) -> ExitCode:
        if not self.verdicts.nonsignaling:
            return ExitCode.SIGNALING
        if self.verdicts.classical:
            return ExitCode.CLASSICAL
        return ExitCode.NONCLASSICAL

    def to_dict(self, with_certificate: bool = False) -> Dict[str, Any]:
        p = self.correlation
        data: Dict[str, Any] = {
            "digest": self.digest,
            "game": p.shape.label,
            "mode": p.mode.value,
            "verdicts": self.verdicts.to_dict(),
            "bell": self.bell.to_dict() if self.bell is not None else None,
        }
        if with_certificate:
            data["certificate"] = self.certificate.to_dict() if self.certificate is not None else None
        data["exit_code"] = int(self.exit_code)
        return data

    def render(self, with_certificate: bool = False) -> str:
        p = self.correlation
        lines = [
            f"input     sha256:{self.digest}",
            f"game      {p.shape.label} ({p.mode.value})",
        ]
        for name, value in self.verdicts.to_dict().items():
            shown = "n/a" if value is None else ("yes" if value else "no")
            lines.append(f"{name:<13} {shown}")
        if self.bell is not None:
            bell = self.bell.to_dict()
            lines.append("bell      " + "  ".join(f"{k}={bell[k]}" for k in ("J0", "J1", "J2", "J3")))
            if self.bell.violated is not None:
                lines.append(f"violated  {bell['violated']} by {bell['magnitude']}")
        if with_certificate and self.certificate is not None:
            cert = self.certificate
            if cert.distribution is not None:
                lines.append("mixture")
                for f in cert.distribution.support():
                    weight = cert.distribution.weight(f)
                    lines.append(f"  f={list(f.values)}  w={weight}")
            if cert.functional is not None:
                lines.append(f"separating functional, bound {cert.functional.to_dict()['bound']}")
                for row in cert.functional.to_dict()["coefficients"]:
                    lines.append("  " + " ".join(str(v) for v in row))
                lines.append(f"violation {cert.to_dict()['violation']}")
        lines.extend(self.notes)
        return "\n".join(lines) + "\n"


def digest(raw: bytes) -> str:
    return hashlib.sha256(raw).hexdigest()


def build_report(p: Correlation, input_digest: str, settings: Settings = DEFAULT_SETTINGS) -> Report:
    """Classify ``p``. Membership is only decided for synchronous correlations."""
    tol = settings.tol
    synchronous = bool(is_synchronous(p, tol))
    nonsignaling = bool(is_nonsignaling(p, tol))
    symmetric = is_symmetric(p, tol)
    certificate = None
    classical: Optional[bool] = None
    notes = []
    if synchronous:
        certificate = classical_membership(p, tol, settings.function_cap)
        classical = certificate.classical
    else:
        notes.append("membership not decided for a non-synchronous correlation")
    bell = None
    if p.shape.n == 3 and p.shape.m == 2 and synchronous and nonsignaling:
        bell = bell_values(w_coordinates(p), tol)
    return Report(
        input_digest,
        p,
        Verdicts(True, synchronous, nonsignaling, symmetric, classical),
        bell,
        certificate,
        notes,
    )


def report_from_bytes(raw: bytes, settings: Settings = DEFAULT_SETTINGS) -> Report:
    p = correlation_loads(raw.decode("utf-8"), settings.tol)
    return build_report(p, digest(raw), settings)
