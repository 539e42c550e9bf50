"""Income sweeps: IRS outcome, credit lost to the IRS-family procedures, divergence intervals."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

from ptcsolve.credit import Scenario, credit_amount
from ptcsolve.errors import DomainError, NotEligible
from ptcsolve.money import Money, round_half_away
from ptcsolve.solvers import (
    DEFAULT_CAP,
    DEFAULT_EPSILON0,
    DEFAULT_TOLERANCE,
    Regime,
    TraceStatus,
    bisection,
    classify_regime,
    irs_fixed_point,
    simplified_procedure,
)

CSV_COLUMNS = (
    "income_cents",
    "m_full_deduction",
    "irs_status",
    "credit_simplified_cents",
    "credit_extension_cents",
    "credit_bisection_cents",
    "deduction_bisection_cents",
    "credit_gap_cents",
)

INELIGIBLE = "ineligible"


@dataclass(frozen=True)
class SweepRecord:
    income: Money
    m_full_deduction: Fraction
    irs_status: str
    regime: Regime
    credit_simplified: Money
    credit_extension: Money | None
    credit_bisection: Money
    deduction_bisection: Money
    credit_gap: Money

    @property
    def diverged(self) -> bool:
        return self.irs_status.startswith("cycle") or self.irs_status == "cap"


def evaluate_income(scenario: Scenario, epsilon0: Money = DEFAULT_EPSILON0, cap: int = DEFAULT_CAP,
                    tolerance: Fraction = DEFAULT_TOLERANCE) -> SweepRecord:
    regime = classify_regime(scenario)
    best = bisection(scenario, tolerance)
    simplified = Money(0)
    extension: Money | None = Money(0)
    try:
        trace = irs_fixed_point(scenario, epsilon0, cap)
        status = trace.label
        simplified = simplified_procedure(scenario).credit
        if trace.status is TraceStatus.CAP:
            extension = None
        else:
            d0 = min(d for _, d in trace.cycle_points())
            extension = Money.from_cents(credit_amount(scenario, d0))
    except NotEligible:
        # D_1 = Q already pushes modified income under the poverty line
        status = INELIGIBLE
    irs_best = max(simplified, extension) if extension is not None else simplified
    return SweepRecord(
        income=scenario.income,
        m_full_deduction=Fraction(scenario.I - scenario.Q, scenario.F),
        irs_status=status,
        regime=regime,
        credit_simplified=simplified,
        credit_extension=extension,
        credit_bisection=best.credit,
        deduction_bisection=best.deduction,
        credit_gap=best.credit - irs_best,
    )


def income_grid(i_min: Money, i_max: Money, step: Money) -> list[Money]:
    if step.cents <= 0:
        raise DomainError("step must be positive")
    if i_min > i_max:
        raise DomainError(f"empty income range: {i_min} > {i_max}")
    return [Money(c) for c in range(i_min.cents, i_max.cents + 1, step.cents)]


def sweep_income(base: Scenario, i_min: Money, i_max: Money, step: Money, **kw) -> list[SweepRecord]:
    """One record per income ``i_min, i_min + step, ... <= i_max``, ascending.

    ``F``, ``Q``, the schedule, rounding and tax function come from ``base``.
    """
    if i_min < base.poverty_line:
        raise DomainError(f"sweep must start at or above the poverty line {base.poverty_line}")
    return [evaluate_income(base.with_income(i), **kw) for i in income_grid(i_min, i_max, step)]


def divergence_intervals(records: list[SweepRecord]) -> list[tuple[Money, Money]]:
    """Maximal runs of consecutive cycle/cap records, as closed income intervals."""
    out = []
    start = prev = None
    for rec in records:
        if rec.diverged:
            if start is None:
                start = rec.income
            prev = rec.income
        elif start is not None:
            out.append((start, prev))
            start = None
    if start is not None:
        out.append((start, prev))
    return out


def _ratio_text(x: Fraction) -> str:
    n = round_half_away(x * 10**6)
    sign = "-" if n < 0 else ""
    whole, part = divmod(abs(n), 10**6)
    return f"{sign}{whole}.{part:06d}"


def write_csv(records: list[SweepRecord], fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow([
            r.income.cents,
            _ratio_text(r.m_full_deduction),
            r.irs_status,
            r.credit_simplified.cents,
            "" if r.credit_extension is None else r.credit_extension.cents,
            r.credit_bisection.cents,
            r.deduction_bisection.cents,
            r.credit_gap.cents,
        ])


def to_csv(records: list[SweepRecord]) -> str:
    buf = io.StringIO()
    write_csv(records, buf)
    return buf.getvalue()
