"""``multicov`` command line.

Commands ``curve``, ``pmf`` and ``fading`` write analytic CSV curves,
``simulate`` writes the Monte-Carlo counterpart and ``validate`` compares the
two. Tail probabilities are written as distribution functions (``1 - P``)
for ``curve`` and ``fading``; the ``kind`` column says which.
"""
import argparse
import csv
import io
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .coverage import coverage_curve
from .scenarios import ScenarioError, load_scenario
from .simulator import estimate_fading_coverage, estimate_k_coverage, run_trials
from .validation import db_grid, db_to_linear, validate_curve

CURVE_HEADER = ["T_dB", "T_linear", "value", "kind", "source", "error"]
SIM_HEADER = ["T_dB", "T_linear", "value", "kind", "source", "std_error", "trials"]

EXIT_OK, EXIT_CONFIG, EXIT_FAIL = 0, 1, 2


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _write(path, text: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _analytic_rows(curve, grid, cdf: bool):
    kind = ("cdf:" if cdf else "") + curve.label
    rows = []
    for t_db, T, v, err in zip(grid, curve.thresholds, curve.values, curve.errors):
        value = "" if err else _fmt(1.0 - v if cdf else v)
        rows.append([_fmt(t_db), _fmt(T), value, kind, "analytic", err or ""])
    return rows


def _scenario(args):
    cfg = load_scenario(args.scenario)
    changes = {}
    if args.trials is not None:
        changes["trials"] = args.trials
    if args.seed is not None:
        changes["seed"] = args.seed
    return replace(cfg, **changes) if changes else cfg


def cmd_curve(args) -> int:
    cfg = _scenario(args)
    grid = db_grid(args.tmin_db, args.tmax_db, args.step_db)
    curve = coverage_curve("k_coverage", db_to_linear(grid), cfg.model, k=args.k)
    _write(args.out, _csv_text(CURVE_HEADER, _analytic_rows(curve, grid, cdf=True)))
    return EXIT_OK


def cmd_pmf(args) -> int:
    cfg = _scenario(args)
    grid = db_grid(args.tmin_db, args.tmax_db, args.step_db)
    curve = coverage_curve("pmf", db_to_linear(grid), cfg.model, k=args.k)
    _write(args.out, _csv_text(CURVE_HEADER, _analytic_rows(curve, grid, cdf=False)))
    return EXIT_OK


def cmd_fading(args) -> int:
    cfg = _scenario(args)
    grid = db_grid(args.tmin_db, args.tmax_db, args.step_db)
    curve = coverage_curve("fading", db_to_linear(grid), cfg.model)
    _write(args.out, _csv_text(CURVE_HEADER, _analytic_rows(curve, grid, cdf=True)))
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = replace(_scenario(args), fading=True)
    grid = db_grid(args.tmin_db, args.tmax_db, args.step_db)
    table = run_trials(cfg)
    rows = []
    for t_db in grid:
        T = float(db_to_linear(t_db))
        for kind, est in ((f"cdf:k_coverage(k={args.k})", estimate_k_coverage(table, T, args.k)),
                          ("cdf:fading", estimate_fading_coverage(table, T))):
            rows.append([_fmt(t_db), _fmt(T), _fmt(1.0 - est.mean), kind, "mc",
                         _fmt(est.std_error), est.trials])
    _write(args.out, _csv_text(SIM_HEADER, rows))
    return EXIT_OK


def cmd_validate(args) -> int:
    cfg = _scenario(args)
    grid = db_grid(args.tmin_db, args.tmax_db, args.step_db)
    quantity = "fading" if args.fading else "k_coverage"
    report = validate_curve(cfg, grid, quantity, k=args.k)
    _write(args.out, report.to_text())
    print(report.summary_line(), file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


COMMANDS = {
    "curve": cmd_curve,
    "pmf": cmd_pmf,
    "fading": cmd_fading,
    "validate": cmd_validate,
    "simulate": cmd_simulate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="multicov", description="SINR multi-coverage in Poisson cellular networks")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--scenario", required=True, help="scenario JSON file or preset name (urban, suburban)")
        p.add_argument("--tmin-db", type=float, required=True)
        p.add_argument("--tmax-db", type=float, required=True)
        p.add_argument("--step-db", type=float, required=True)
        p.add_argument("--k", type=int, default=1)
        p.add_argument("--trials", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--out", required=True, help="output path, '-' for stdout")
        if name == "validate":
            p.add_argument("--fading", action="store_true", help="validate the Rayleigh-fading curve")
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    if args.k < (0 if args.command == "pmf" else 1):
        print("error: --k out of range", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return COMMANDS[args.command](args)
    except (ScenarioError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
