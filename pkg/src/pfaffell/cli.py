"""Command-line front end.

Subcommands::

    identities   randomized sweep over the theta-function identities
    curve        solve-kp / solve-toda: curve coefficients -> modular parameter
    residual     evaluate one equation on a polynomial model file

Exit codes: 0 pass, 1 identity failure, 2 usage or parse error, 3 domain
error, 4 evaluation error. Reports are canonical JSON (sorted keys, 17
significant digits), so equal arguments give identical bytes.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__
from .curves import solve_tau_kp, solve_tau_toda
from .errors import (
    DomainError,
    IndexOutOfRange,
    InconsistentData,
    ModelFormatError,
    PfaffEllError,
    SingularArgs,
    VariantMismatch,
)
from .identities import SUITES, identity_suite, summarize
from .numerics import DEFAULT_TOL, Tolerance
from .report import SCHEMA_VERSION, dumps

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_EVAL = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> list[float]:
    try:
        vals = [float(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _complex_list(text: str) -> list[complex]:
    return [_complex(s) for s in text.split(",") if s.strip()]


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--output", type=Path, help="write the JSON report here instead of stdout")
    common.add_argument("--verbose", action="store_true")

    p = _Parser(prog="pfaffell", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ident = sub.add_parser("identities", parents=[common], help="theta identity sweep")
    ident.add_argument("--suite", choices=sorted(SUITES), default="all")
    ident.add_argument("--samples", type=_nonneg_int, default=100)
    ident.add_argument("--tau-grid", type=_float_list, default=[1.0, 1.5, 2.0], help='e.g. "1,1.5,2" (t in tau = i t)')
    ident.add_argument("--tol", type=_positive_float, help="relative tolerance (default %g)" % DEFAULT_TOL.rel_tol)
    ident.add_argument("--workers", type=int, help="process count; capped by PFAFF_ELL_THREADS")

    curve = sub.add_parser("curve", help="invert curve coefficients")
    csub = curve.add_subparsers(dest="curve_command", required=True, parser_class=_Parser)
    kp = csub.add_parser("solve-kp", parents=[common])
    kp.add_argument("--curve-r", type=float, required=True)
    kp.add_argument("--v", type=float, required=True)
    td = csub.add_parser("solve-toda", parents=[common])
    td.add_argument("--R", type=float, required=True)
    td.add_argument("--C", type=float, required=True)

    res = sub.add_parser("residual", parents=[common], help="evaluate an equation on a model file")
    res.add_argument("--model", type=Path, required=True)
    res.add_argument("--eq", required=True)
    res.add_argument("--z", type=_complex)
    res.add_argument("--zeta", type=_complex)
    res.add_argument("--zbar", type=_complex)
    res.add_argument("--zetabar", type=_complex)
    res.add_argument("--zs", type=_complex_list, help='spectral points for determinant relations, e.g. "2,3,5"')
    res.add_argument("--point", default="", help='e.g. "t0=0.1,t1=0.2" or "t0=0.1+0.2j,tb0=0.1-0.2j"')
    res.add_argument("--tol", type=_positive_float)
    return p


def _emit(report: dict, output: Path | None) -> None:
    text = dumps(report) + "\n"
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text)


def _header(command: str) -> dict:
    return {"schema": SCHEMA_VERSION, "version": __version__, "command": command}


def _default_workers(requested: int | None) -> int:
    if requested is not None:
        return requested
    return min(os.cpu_count() or 1, int(os.environ.get("PFAFF_ELL_THREADS", "0") or 0) or 1)


def cmd_identities(args) -> int:
    tol = DEFAULT_TOL if args.tol is None else Tolerance(DEFAULT_TOL.abs_tol, args.tol, DEFAULT_TOL.fd_tol)
    entries = identity_suite(
        tau_grid=args.tau_grid,
        samples=args.samples,
        seed=args.seed,
        tol=tol,
        identities=SUITES[args.suite],
        workers=_default_workers(args.workers),
    )
    failed = [e for e in entries if not e.passed]
    report = _header("identities")
    report["config"] = {
        "suite": args.suite,
        "samples": args.samples,
        "seed": args.seed,
        "tau_grid": args.tau_grid,
        "rel_tol": tol.rel_tol,
        "fd_tol": tol.fd_tol,
    }
    report["summary"] = summarize(entries)
    report["passed"] = not failed
    report["entries"] = entries if args.verbose else failed
    _emit(report, args.output)
    return EXIT_OK if not failed else EXIT_FAIL


def cmd_curve(args) -> int:
    report = _header(f"curve {args.curve_command}")
    try:
        if args.curve_command == "solve-kp":
            report["input"] = {"curve_r": args.curve_r, "v": args.v}
            data = solve_tau_kp(args.curve_r, args.v)
        else:
            report["input"] = {"R": args.R, "C": args.C}
            data = solve_tau_toda(args.R, args.C)
    except (DomainError, InconsistentData) as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        _emit(report, args.output)
        print(f"pfaffell: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    report["result"] = data.to_dict()
    _emit(report, args.output)
    return EXIT_OK


def cmd_residual(args) -> int:
    from .hirota import PolynomialTauModel, TimePoint, eval_equation
    from .hirota.equations import REGISTRY

    if args.eq not in REGISTRY:
        print(f"pfaffell: unknown equation id {args.eq!r}; choose from {', '.join(REGISTRY)}", file=sys.stderr)
        return EXIT_USAGE
    try:
        model = PolynomialTauModel.load(args.model)
        point = TimePoint.parse(args.point)
    except (OSError, ModelFormatError, ValueError) as exc:
        print(f"pfaffell: cannot read input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if model.variant == "Toda" and point.tbar is None:
        point = TimePoint.toda(point.t)
    spec = REGISTRY[args.eq]
    given = {k: getattr(args, k) for k in ("z", "zeta", "zbar", "zetabar", "zs")}
    missing = [k for k in spec.args if given.get(k) is None]
    if missing:
        print(f"pfaffell: {args.eq} needs --{', --'.join(missing)}", file=sys.stderr)
        return EXIT_USAGE
    try:
        rep = eval_equation(
            args.eq,
            model,
            point,
            {k: given[k] for k in spec.args},
            tol=args.tol,
            seed=args.seed,
        )
    except (VariantMismatch, SingularArgs, IndexOutOfRange, ZeroDivisionError, PfaffEllError) as exc:
        print(f"pfaffell: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_EVAL
    report = _header("residual")
    report["report"] = rep
    _emit(report, args.output)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "identities":
        return cmd_identities(args)
    if args.command == "curve":
        return cmd_curve(args)
    return cmd_residual(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
