import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from syncorr.cli.report import report_from_bytes
from syncorr.cli.reproduce import render_table, reproduce
from syncorr.core.config import Settings
from syncorr.core.errors import ParseError, ValueOutOfRange
from syncorr.core.types import BellFunctional, ExitCode, GameShape
from syncorr.core.utils import parse_game
from syncorr.correlation.codec import correlation_to_dict, dumps
from syncorr.polytope.bell import bell_values
from syncorr.polytope.coordinates import w_coordinates
from syncorr.polytope.double_description import affine_dimension, dd_enumerate
from syncorr.polytope.polytopes import classical_polytope_3_2, sync_ns_polytope_3_2
from syncorr.quantum.observables import tsirelson_certificate
from syncorr.quantum.pvm import PVMFamily
from syncorr.quantum.strategies import correlation_me
from syncorr.search.minimize import minimize

logger = logging.getLogger("syncorr")

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")
SUPPORTED_VERTEX_GAMES = (GameShape(3, 2),)
SIGN_PATTERNS = ((1, 1, 1), (-1, 1, 1), (1, -1, 1), (1, 1, -1))


def _write(text: str) -> None:
    sys.stdout.write(text)


def cmd_check(args: argparse.Namespace, settings: Settings) -> int:
    if args.tol is not None:
        if not args.tol > 0:
            raise ValueOutOfRange(f"--tol must be positive. Got: {args.tol}")
        settings = replace(settings, tol=args.tol)
    raw = Path(args.path).read_bytes()
    report = report_from_bytes(raw, settings)
    if args.json:
        _write(dumps(report.to_dict(with_certificate=args.certificate)))
    else:
        _write(report.render(with_certificate=args.certificate))
    return int(report.exit_code)


def cmd_vertices(args: argparse.Namespace, settings: Settings) -> int:
    shape = parse_game(args.game)
    if shape not in SUPPORTED_VERTEX_GAMES:
        raise ValueOutOfRange(f"Vertex enumeration is available for 3x2 only. Got: {shape.label}")
    h = sync_ns_polytope_3_2() if args.which == "ns" else classical_polytope_3_2()
    vertices = dd_enumerate(h)
    dimension = affine_dimension(vertices)
    if args.json:
        data: Dict[str, Any] = {"game": shape.label, "which": args.which, "dimension": dimension}
        data.update(vertices.to_dict())
        _write(dumps(data))
    else:
        lines = [f"# {len(vertices)} vertices, affine dimension {dimension}"]
        lines += [" ".join(str(v) for v in vertex) for vertex in vertices.vertices]
        _write("\n".join(lines) + "\n")
    return int(ExitCode.CLASSICAL)


def _load_pvms(path: str, settings: Settings) -> PVMFamily:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise ParseError(f"Invalid JSON: {e}")
    return PVMFamily.from_dict(data, settings.tol)


def cmd_quantum_eval(args: argparse.Namespace, settings: Settings) -> int:
    pvms = _load_pvms(args.pvms, settings)
    p = correlation_me(pvms, settings.tol)
    data: Dict[str, Any] = {"correlation": correlation_to_dict(p)}
    if pvms.m == 2:
        data["w"] = w_coordinates(p).to_list()
    if pvms.n == 3 and pvms.m == 2:
        data["bell"] = bell_values(w_coordinates(p), settings.tol).to_dict()
        certificates = []
        for signs in SIGN_PATTERNS:
            cert = tsirelson_certificate(pvms, signs, settings.tol)
            certificates.append(
                {
                    "signs": list(cert.signs),
                    "functional": cert.functional.name,
                    "certificate": cert.certificate,
                    "value": cert.functional_value,
                }
            )
        data["certificates"] = certificates
    if args.json:
        _write(dumps(data))
        return int(ExitCode.CLASSICAL)
    lines = [f"d={pvms.d} n={pvms.n} m={pvms.m}", "correlation"]
    lines += ["  " + " ".join(f"{v:.12f}" for v in row) for row in data["correlation"]["entries"]]
    if "w" in data:
        lines.append("w  " + " ".join(f"{v:.12f}" for v in data["w"]))
    if "bell" in data:
        bell = data["bell"]
        lines.append("bell  " + "  ".join(f"{k}={bell[k]:.12f}" for k in ("J0", "J1", "J2", "J3")))
        for cert in data["certificates"]:
            signs = "".join("+" if s > 0 else "-" for s in cert["signs"])
            lines.append(f"trace {signs} {cert['functional']}: {cert['certificate']:.12f}")
    _write("\n".join(lines) + "\n")
    return int(ExitCode.CLASSICAL)


def cmd_optimize(args: argparse.Namespace, settings: Settings) -> int:
    target = BellFunctional.from_label(args.target)
    grid = settings.grid_steps if args.grid is None else args.grid
    refine = settings.refine_tol if args.refine is None else args.refine
    result = minimize(target, grid, refine)
    text = dumps(result.to_dict())
    if args.out:
        Path(args.out).write_text(text)
        logger.info(f"wrote {args.out}")
    else:
        _write(text)
    return int(ExitCode.CLASSICAL)


def cmd_reproduce(args: argparse.Namespace, settings: Settings) -> int:
    rows = reproduce(args.seed, settings, only=args.only)
    if args.json:
        _write(dumps({"seed": args.seed, "rows": [row.to_dict() for row in rows]}))
    else:
        _write(render_table(rows))
    return int(ExitCode.CLASSICAL) if all(row.passed for row in rows) else int(ExitCode.FAILURE)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="syncorr", description="Classify and optimize synchronous correlations of nonlocal games."
    )
    parser.add_argument("--log-level", choices=LOG_LEVELS, default="WARNING", help="Logging verbosity")
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", help="Classify a correlation file")
    check.add_argument("path", help="Correlation JSON file")
    check.add_argument("--tol", type=float, default=None, help="Tolerance for float-mode checks")
    check.add_argument("--certificate", action="store_true", help="Print the mixture or separating functional")
    check.add_argument("--json", action="store_true", help="Machine-readable output")
    check.set_defaults(handler=cmd_check)

    vertices = commands.add_parser("vertices", help="Enumerate polytope vertices exactly")
    vertices.add_argument("--game", default="3x2", help="Game label, e.g. 3x2")
    vertices.add_argument("--which", choices=("ns", "classical"), default="ns")
    vertices.add_argument("--json", action="store_true")
    vertices.set_defaults(handler=cmd_vertices)

    quantum = commands.add_parser("quantum-eval", help="Evaluate a maximally entangled PVM strategy")
    quantum.add_argument("--pvms", required=True, help="PVM JSON file")
    quantum.add_argument("--json", action="store_true")
    quantum.set_defaults(handler=cmd_quantum_eval)

    optimize = commands.add_parser("optimize", help="Minimize a Bell functional over qubit strategies")
    optimize.add_argument("--target", default="J0", help="J0, J1, J2 or J3")
    optimize.add_argument("--grid", type=int, default=None, help="Grid steps per axis")
    optimize.add_argument("--refine", type=float, default=None, help="Refinement step tolerance")
    optimize.add_argument("--out", default=None, help="Write the result JSON here instead of stdout")
    optimize.set_defaults(handler=cmd_optimize)

    reproduce = commands.add_parser("reproduce", help="Recompute every published number")
    reproduce.add_argument("--seed", type=int, required=True, help="Seed for the randomized checks")
    selection = reproduce.add_mutually_exclusive_group()
    selection.add_argument("--all", action="store_true", help="Run every check (the default)")
    selection.add_argument("--only", action="append", default=None, metavar="CHECK", help="Run only this check")
    reproduce.add_argument("--json", action="store_true")
    reproduce.set_defaults(handler=cmd_reproduce)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level), format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr
    )
    try:
        settings = Settings.from_env()
        return args.handler(args, settings)
    except (ValueError, OSError) as e:
        sys.stderr.write(f"syncorr: error: {e}\n")
        return int(ExitCode.INVALID_INPUT)
    except RuntimeError as e:
        logger.exception("internal failure")
        sys.stderr.write(f"syncorr: internal error: {e}\n")
        return int(ExitCode.FAILURE)


if __name__ == "__main__":
    sys.exit(main())
