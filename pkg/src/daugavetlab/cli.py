"""Command line front end.

    daugavetlab verify --scenario case.json [--out report.json]
    daugavetlab sweep --scenario case.json [--format csv]
    daugavetlab counterexample --scenario case.json
    daugavetlab disk --scenario case.json
    daugavetlab selftest [--seed 0]

Exit codes: 0 when the run completed (individual checks may still report
"fails" or "error" inside the report), 1 for a rejected scenario file,
2 for an internal cross-check failure.
"""

from __future__ import annotations

import argparse
import sys

from .errors import InvariantViolation
from .scenarios import (
    CIRCLE_CHECKS,
    COUNTEREXAMPLE_CHECKS,
    DISK_CHECKS,
    SWEEP_CHECKS,
    ScenarioError,
    parse_scenario_file,
    render_report_csv,
    render_report_json,
    run_scenario,
)
from .selftest import run_selftest

__all__ = ["main"]


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--scenario", required=True, help="scenario JSON file")
    sub.add_argument("--out", help="write the report here instead of stdout")
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_argument("--tol", type=float, default=1e-9,
                     help="default tolerance for checks that accept one")
    sub.add_argument("--seed", type=int, default=None,
                     help="override the scenario seed recorded in the report")
    sub.add_argument("--threads", type=int, default=1,
                     help="run independent checks concurrently")
    sub.add_argument("--timings", action="store_true",
                     help="embed per-check runtimes (breaks byte-for-byte "
                          "report reproducibility)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="daugavetlab",
        description="Exact operator-norm experiments for weighted compositions "
                    "with finite-rank perturbations.")
    subs = parser.add_subparsers(dest="command", required=True)

    for name, blurb in (("verify", "run every check listed in a scenario"),
                        ("sweep", "grid refinement sweeps only"),
                        ("counterexample", "counterexample constructions only"),
                        ("disk", "disk-algebra checks only")):
        _add_common(subs.add_parser(name, help=blurb))

    st = subs.add_parser("selftest", help="run the built-in battery")
    st.add_argument("--seed", type=int, default=0)
    st.add_argument("--out", help="write the report here instead of stdout")
    return parser


_ALLOWED = {
    "verify": None,
    "sweep": SWEEP_CHECKS,
    "counterexample": COUNTEREXAMPLE_CHECKS,
    "disk": DISK_CHECKS,
}
assert set(_ALLOWED["sweep"]) <= set(CIRCLE_CHECKS)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "selftest":
        report = run_selftest(seed=args.seed)
        _emit(render_report_json(report), args.out)
        return 0

    try:
        scenario = parse_scenario_file(args.scenario)
        if args.threads < 1:
            raise ScenarioError("--threads", f"thread count {args.threads} < 1")
        report = run_scenario(scenario, tol=args.tol, seed=args.seed,
                              threads=args.threads, timings=args.timings,
                              allowed=_ALLOWED[args.command])
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InvariantViolation as exc:
        print(f"internal cross-check failed: {exc}", file=sys.stderr)
        return 2

    text = (render_report_csv(report) if args.format == "csv"
            else render_report_json(report))
    _emit(text, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
