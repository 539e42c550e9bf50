"""Command-line front end: ``ptcsolve solve|trace|sweep|schedules``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from ptcsolve.credit import evaluate_credit, is_feasible
from ptcsolve.errors import DomainError, IterationCapError, NotEligible, ParseError, ScenarioError, ScheduleError
from ptcsolve.money import Money, RoundingMode, parse_decimal
from ptcsolve.oracle import oracle_solve
from ptcsolve.policy import BUILTINS, builtin, dump_schedule, load_schedule
from ptcsolve.scenario_file import ScenarioFile, load_scenario_file
from ptcsolve.solvers import (
    DEFAULT_CAP,
    DEFAULT_TOLERANCE,
    classify_regime,
    irs_fixed_point,
    irs_solution,
    simplified_procedure,
    software_extension,
    bisection,
)
from ptcsolve.sweep import divergence_intervals, sweep_income, write_csv

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_INVARIANT = 4
EXIT_NOT_ELIGIBLE = 5
EXIT_NO_RESULT = 6
EXIT_IO = 7

METHODS = ("irs", "simplified", "extension", "bisection", "oracle", "all")


def _dollars(text: str) -> Money:
    try:
        return Money.dollars(text.replace(",", "").lstrip("$"))
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _cents_fraction(text: str) -> Fraction:
    try:
        value = parse_decimal(text) * 100
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _load(args, default: RoundingMode) -> ScenarioFile:
    sf = load_scenario_file(args.scenario, default)
    if args.rounding:
        sf = ScenarioFile(sf.scenario.with_rounding(RoundingMode(args.rounding)), True, sf.fixed_deduction, sf.schedule_name)
    return sf


def _emit(args, text_lines: list[str], record: dict) -> None:
    if args.json:
        print(json.dumps(record, indent=2, sort_keys=True))
    else:
        print("\n".join(text_lines))


def _scenario_record(sf: ScenarioFile) -> dict:
    s = sf.scenario
    return {
        "fpl_cents": s.F,
        "premium_cents": s.Q,
        "income_cents": s.I,
        "schedule": sf.schedule_name,
        "rounding": s.rounding.value,
    }


def _scenario_line(sf: ScenarioFile) -> str:
    s = sf.scenario
    return (f"scenario: F={s.poverty_line} Q={s.premium} I={s.income} "
            f"schedule={sf.schedule_name} rounding={s.rounding.value}")


def _row(method: str, status: str, d: Money | None, c: Money | None, q: Money, feasible: bool | None = None) -> dict:
    row = {"method": method, "status": status, "deduction_cents": None, "credit_cents": None, "feasible": None}
    if d is not None:
        if feasible is None:
            feasible = d.cents + c.cents <= q.cents
        row.update(deduction_cents=d.cents, credit_cents=c.cents, feasible=feasible)
    return row


def _run_method(name: str, sf: ScenarioFile, args) -> dict:
    s = sf.scenario
    eps = args.epsilon0
    try:
        if name == "irs":
            trace = irs_fixed_point(s, eps, DEFAULT_CAP)
            res = irs_solution(trace)
            if res is None:
                return _row(name, trace.label, None, None, s.premium)
            return _row(name, trace.label, res.deduction, res.credit, s.premium)
        if name == "simplified":
            res = simplified_procedure(s)
            return _row(name, "ok", res.deduction, res.credit, s.premium)
        if name == "extension":
            res = software_extension(s, eps, DEFAULT_CAP)
            return _row(name, res.trace.label, res.deduction, res.credit, s.premium)
        if name == "bisection":
            res = bisection(s, args.tolerance)
            return _row(name, res.method_label, res.deduction, res.credit, s.premium)
        if name == "oracle":
            res = oracle_solve(s, args.grid_step)
            # the oracle's deduction is on the cent grid; judge it unrounded
            ok = is_feasible(s, res.deduction, RoundingMode.EXACT)
            return _row(name, f"grid:{args.grid_step.plain()}", res.deduction, res.credit, s.premium, ok)
    except NotEligible:
        return _row(name, "not-eligible", None, None, s.premium)
    except IterationCapError:
        return _row(name, "cap", None, None, s.premium)
    raise ValueError(name)


def _fmt(cents: int | None) -> str:
    return "-" if cents is None else str(Money(cents))


def cmd_solve(args) -> int:
    sf = _load(args, RoundingMode.PENNY)
    s = sf.scenario
    regime = classify_regime(s)
    lines = [_scenario_line(sf), f"regime: {regime.value}"]
    record = {"scenario": _scenario_record(sf), "regime": regime.value}

    if sf.fixed_deduction is not None:
        ev = evaluate_credit(s, sf.fixed_deduction)
        c = Money.from_cents(ev.credit)
        rows = [_row("fixed", "fixed-deduction", sf.fixed_deduction, c, s.premium)]
        if ev.contribution is not None:
            contrib = Money.from_cents(ev.contribution)
            record["expected_contribution_cents"] = contrib.cents
            lines.append(f"expected contribution: {contrib}")
    else:
        names = METHODS[:-1] if args.method == "all" else (args.method,)
        rows = [_run_method(n, sf, args) for n in names]
    record["results"] = rows

    lines.append(f"{'method':<11} {'status':<26} {'deduction':>13} {'credit':>13}  D+C<=Q")
    for r in rows:
        feas = "-" if r["feasible"] is None else ("yes" if r["feasible"] else "no")
        lines.append(f"{r['method']:<11} {r['status']:<26} {_fmt(r['deduction_cents']):>13} {_fmt(r['credit_cents']):>13}  {feas}")
    _emit(args, lines, record)

    if len(rows) == 1 and rows[0]["deduction_cents"] is None:
        return EXIT_NOT_ELIGIBLE if rows[0]["status"] == "not-eligible" else EXIT_NO_RESULT
    if regime.value == "not-eligible":
        return EXIT_NOT_ELIGIBLE
    return EXIT_OK


def cmd_trace(args) -> int:
    sf = _load(args, RoundingMode.DOLLAR)
    trace = irs_fixed_point(sf.scenario, args.epsilon0, args.max_steps)
    lines = [_scenario_line(sf), f"{'n':>5} {'C_n':>13} {'D_n':>13}"]
    rows = []
    for n, (c, d) in enumerate(trace.points, start=1):
        lines.append(f"{n:>5} {str(c):>13} {str(d):>13}")
        rows.append({"n": n, "credit_cents": c.cents, "deduction_cents": d.cents})
    status = trace.label
    if trace.converged_at is not None:
        status += f" (at n={trace.converged_at})"
    lines.append(f"status: {status}")
    _emit(args, lines, {
        "scenario": _scenario_record(sf),
        "points": rows,
        "status": trace.label,
        "converged_at": trace.converged_at,
        "cycle_start": trace.cycle_start,
        "cycle_period": trace.cycle_period,
    })
    return EXIT_OK


def cmd_sweep(args) -> int:
    sf = _load(args, RoundingMode.PENNY)
    records = sweep_income(sf.scenario, args.min, args.max, args.step, epsilon0=args.epsilon0, tolerance=args.tolerance)
    try:
        if args.out == "-":
            write_csv(records, sys.stdout)
        else:
            with open(args.out, "w", newline="") as fh:
                write_csv(records, fh)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO
    intervals = divergence_intervals(records)
    summary = {"rows": len(records), "divergence_intervals": [[lo.cents, hi.cents] for lo, hi in intervals]}
    lines = [f"rows: {len(records)}", f"divergence intervals: {len(intervals)}"]
    lines += [f"  [{lo}, {hi}]" for lo, hi in intervals]
    out = sys.stderr if args.out == "-" else sys.stdout
    if args.json:
        print(json.dumps(summary, indent=2, sort_keys=True), file=out)
    else:
        print("\n".join(lines), file=out)
    return EXIT_OK


def cmd_schedules(args) -> int:
    if args.action == "list":
        for name in sorted(BUILTINS):
            print(f"builtin:{name}")
        return EXIT_OK
    if args.action == "show":
        if args.target.startswith("builtin:"):
            sched = builtin(args.target.split(":", 1)[1])
        else:
            sched = load_schedule(Path(args.target).read_text())
        sys.stdout.write(dump_schedule(sched))
        return EXIT_OK
    status = EXIT_OK
    for path in args.paths:
        try:
            sched = load_schedule(Path(path).read_text())
        except (ParseError, ScheduleError) as exc:
            print(f"{path}: invalid: {exc}")
            status = EXIT_INVARIANT if isinstance(exc, ScheduleError) else EXIT_PARSE
        else:
            print(f"{path}: ok ({len(sched.segments)} segments, year {sched.year_label or '?'})")
    return status


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rounding", choices=[m.value for m in RoundingMode], help="override the file's rounding mode")
    common.add_argument("--epsilon0", type=_dollars, default=Money(100), help="IRS convergence tolerance in dollars (default 1)")
    common.add_argument("--tolerance", type=_cents_fraction, default=DEFAULT_TOLERANCE,
                        help="bisection stopping width in dollars (default 0.005)")
    common.add_argument("--json", action="store_true", help="structured output")

    parser = argparse.ArgumentParser(prog="ptcsolve", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="compute (D, C) with one or all methods")
    p.add_argument("scenario")
    p.add_argument("--method", choices=METHODS, default="all")
    p.add_argument("--grid-step", type=_dollars, default=Money(1), help="oracle grid step in dollars (default 0.01)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("trace", parents=[common], help="print the IRS fixed-point iterates")
    p.add_argument("scenario")
    p.add_argument("--max-steps", type=int, default=DEFAULT_CAP)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("sweep", parents=[common], help="sweep income and write a CSV")
    p.add_argument("scenario")
    p.add_argument("--min", type=_dollars, required=True)
    p.add_argument("--max", type=_dollars, required=True)
    p.add_argument("--step", type=_dollars, required=True)
    p.add_argument("--out", required=True, help="CSV path, or - for stdout")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("schedules", help="list, show or validate percentage schedules")
    ssub = p.add_subparsers(dest="action", required=True)
    ssub.add_parser("list")
    show = ssub.add_parser("show")
    show.add_argument("target", help="builtin:<year> or a schedule file")
    val = ssub.add_parser("validate")
    val.add_argument("paths", nargs="+")
    p.set_defaults(func=cmd_schedules)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "max_steps", 1) < 1:
        parser.error("--max-steps must be at least 1")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ScenarioError, ScheduleError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except NotEligible as exc:
        print(f"not eligible: {exc}", file=sys.stderr)
        return EXIT_NOT_ELIGIBLE
    except DomainError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
