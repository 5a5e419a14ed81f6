"""Command-line surface.

Subcommands: bands, check, dispersion, theorem1, fuzz, sharpness.  Reports go
to stdout (or --out); diagnostics go to stderr.  Exit status: 0 success,
1 parse/validation error, 2 inequality violation from check or fuzz.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bands as bands_mod
from . import estimates as est_mod
from . import fuzz as fuzz_mod
from . import perturbation as pert_mod
from .core import PeriodicJacobi, instance_from_json, instance_to_dict
from .discriminant import dispersion_csv


class CliError(Exception):
    """Maps to exit status 1 with a one-line diagnostic."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; the contract is 1
        raise CliError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="jacobiband",
                     description="Band structure, spectral gap estimates, and "
                                 "perturbation checks for periodic Jacobi matrices")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_instance_flags(sp):
        sp.add_argument("--instance", help='inline instance JSON {"a":[...],"b":[...]}')
        sp.add_argument("--file", help="path to an instance JSON file")

    sp = sub.add_parser("bands", help="band/gap structure as JSON")
    add_instance_flags(sp)
    sp.add_argument("--out", help="write the report here instead of stdout")

    sp = sub.add_parser("check", help="check all eight spectral estimates")
    add_instance_flags(sp)
    sp.add_argument("--tol", type=float, default=1e-9,
                    help="relative slack tolerance, scaled by (1 + r) [default 1e-9]")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--out")

    sp = sub.add_parser("dispersion", help="dispersion curves as CSV")
    add_instance_flags(sp)
    sp.add_argument("--kpoints", type=int, default=201,
                    help="points on the k-grid over [0, pi] [default 201]")
    sp.add_argument("--out")

    sp = sub.add_parser("theorem1",
                        help="gap law convergence table for the weakened-coupling family")
    sp.add_argument("--p", type=int, required=True, help="period")
    sp.add_argument("--c", default="1e-2,1e-3,1e-4",
                    help="comma-separated perturbation sizes in (0, 1)")
    sp.add_argument("--out")

    sp = sub.add_parser("fuzz", help="randomized campaign over all estimates")
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--p", type=int, default=None,
                    help="fix the period (default: draw from 2..12)")
    sp.add_argument("--tol", type=float, default=1e-9,
                    help="relative slack tolerance [default 1e-9]")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--out")

    sp = sub.add_parser("sharpness",
                        help="slack-minimizing search for one inequality")
    add_instance_flags(sp)
    sp.add_argument("--ineq", default="estc", choices=est_mod.INEQUALITY_IDS,
                    help="inequality whose slack is minimized [default estc]")
    sp.add_argument("--p", type=int, default=None,
                    help="period (required unless a start instance is given)")
    sp.add_argument("--trials", type=int, default=2000,
                    help="search iterations [default 2000]")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--format", choices=("json", "csv"), default="json",
                    help="json: best instance + trace; csv: trace only")
    sp.add_argument("--out")
    return parser


def _load_instance(args, required: bool = True) -> PeriodicJacobi | None:
    if getattr(args, "instance", None) and getattr(args, "file", None):
        raise CliError("give either --instance or --file, not both")
    if getattr(args, "instance", None):
        return instance_from_json(args.instance)
    if getattr(args, "file", None):
        with open(args.file, "r", encoding="utf-8") as fh:
            return instance_from_json(fh.read())
    if required:
        raise CliError("an instance is required (--instance or --file)")
    return None


def _cmd_bands(args) -> tuple[str, int]:
    J = _load_instance(args)
    S = bands_mod.band_structure(J)
    return bands_mod.spectrum_to_json(S) + "\n", 0


def _cmd_check(args) -> tuple[str, int]:
    J = _load_instance(args)
    S = bands_mod.band_structure(J)
    tol = args.tol * (1.0 + S.summary.radius_r)
    report = est_mod.check_estimates(J, S, tol)
    status = 2 if report.violated else 0
    if args.format == "csv":
        text = est_mod.CSV_HEADER + "\n" + est_mod.report_to_csv_row(report) + "\n"
    else:
        d = est_mod.report_to_dict(report)
        d["instance"] = instance_to_dict(J)
        # comparison only (not a checked estimate): a published bound relates
        # p^2 sqrt(p) times the largest gap to the coupling spread
        max_gap = max((g.length for g in S.gaps), default=0.0)
        d["max_gap_comparison"] = {
            "p2_sqrtp_max_gap": J.p ** 2 * (J.p ** 0.5) * max_gap,
            "coupling_spread": max(J.a) - min(J.a),
        }
        text = json.dumps(d) + "\n"
    return text, status


def _cmd_dispersion(args) -> tuple[str, int]:
    J = _load_instance(args)
    return dispersion_csv(J, args.kpoints), 0


def _cmd_theorem1(args) -> tuple[str, int]:
    try:
        c_values = [float(t) for t in args.c.split(",") if t.strip()]
    except ValueError as exc:
        raise CliError(f"bad --c list: {exc}") from None
    if not c_values:
        raise CliError("--c list is empty")
    rows = pert_mod.theorem1_report(args.p, c_values)
    return pert_mod.theorem1_csv(rows), 0


def _cmd_fuzz(args) -> tuple[str, int]:
    kwargs = {"trials": args.trials, "seed": args.seed}
    if args.p is not None:
        kwargs["p_min"] = kwargs["p_max"] = args.p
    cfg = fuzz_mod.FuzzConfig(**kwargs)
    report = fuzz_mod.fuzz_estimates(cfg, slack_rel_tol=args.tol)
    status = 0 if report.ok else 2
    if args.format == "csv":
        return fuzz_mod.fuzz_csv(report), status
    return fuzz_mod.fuzz_summary_json(report) + "\n", status


def _cmd_sharpness(args) -> tuple[str, int]:
    start = _load_instance(args, required=False)
    if start is None and args.p is None:
        raise CliError("sharpness needs --p or a start instance")
    p = start.p if start is not None else args.p
    result = fuzz_mod.sharpness_search(args.ineq, p, args.trials, args.seed,
                                       start=start)
    if args.format == "csv":
        return fuzz_mod.sharpness_trace_csv(result), 0
    d = {
        "inequality": result.inequality,
        "best_instance": instance_to_dict(result.best_instance),
        "best_slack": result.best_slack,
        "iterations": len(result.trace) - 1,
    }
    return json.dumps(d) + "\n", 0


_COMMANDS = {
    "bands": _cmd_bands,
    "check": _cmd_check,
    "dispersion": _cmd_dispersion,
    "theorem1": _cmd_theorem1,
    "fuzz": _cmd_fuzz,
    "sharpness": _cmd_sharpness,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        text, status = _COMMANDS[args.command](args)
    except CliError as exc:
        print(f"jacobiband: error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError, RuntimeError, json.JSONDecodeError) as exc:
        print(f"jacobiband: error: {exc}", file=sys.stderr)
        return 1
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
