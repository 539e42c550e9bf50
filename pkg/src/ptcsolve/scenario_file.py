"""Scenario file parsing.

``key: value`` lines, ``#`` comments::

    fpl: 16240
    premium_annual: 9697
    income: 71150
    schedule: builtin:2018        # or a path, relative to this file
    rounding: dollar              # exact | penny | dollar (optional)
    tax_brackets: 0:0.10, 9525:0.12, 38700:0.22   (optional, default flat 20%)
    percent_decimals: 4           # optional
    deduction: 0                  # optional: evaluate at this fixed deduction
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from ptcsolve.credit import DEFAULT_TAX, Scenario, TaxFunction
from ptcsolve.errors import ParseError, ScenarioError, ScheduleError
from ptcsolve.money import Money, RoundingMode, parse_decimal
from ptcsolve.policy import PercentageSchedule, builtin, load_schedule

KEYS = ("fpl", "premium_annual", "income", "schedule", "rounding", "tax_brackets", "percent_decimals", "deduction")
REQUIRED = ("fpl", "premium_annual", "income")


@dataclass(frozen=True)
class ScenarioFile:
    scenario: Scenario
    rounding_given: bool
    fixed_deduction: Money | None = None
    schedule_name: str = "builtin:2018"


def _money(value: str, line: int) -> Money:
    try:
        return Money.dollars(value.replace(",", "").lstrip("$"))
    except ParseError as exc:
        raise ParseError(str(exc), line) from None


def _tax(value: str, line: int) -> TaxFunction:
    brackets = []
    for item in value.split(","):
        item = item.strip()
        if not item:
            continue
        if item.count(":") != 1:
            raise ParseError(f"tax bracket {item!r} is not threshold:rate", line)
        threshold, rate = item.split(":")
        try:
            brackets.append((_money(threshold, line), parse_decimal(rate)))
        except ParseError as exc:
            raise ParseError(str(exc).split(": ", 1)[-1], line) from None
    try:
        return TaxFunction(tuple(brackets))
    except ScenarioError as exc:
        raise ScenarioError(f"line {line}: {exc}") from None


def _schedule(value: str, line: int, base_dir: Path) -> PercentageSchedule:
    if value.startswith("builtin:"):
        try:
            return builtin(value.split(":", 1)[1])
        except ScheduleError as exc:
            raise ParseError(str(exc), line) from None
    path = Path(value)
    if not path.is_absolute():
        path = base_dir / path
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read schedule {value!r}: {exc.strerror}", line) from None
    return load_schedule(text)


def parse_scenario(text: str, base_dir: Path | str = ".", rounding_default: RoundingMode = RoundingMode.PENNY) -> ScenarioFile:
    base_dir = Path(base_dir)
    raw: dict[str, tuple[str, int]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ParseError(f"expected 'key: value', got {line!r}", lineno)
        key, value = (part.strip() for part in line.split(":", 1))
        key = key.lower()
        if key not in KEYS:
            raise ParseError(f"unknown key {key!r}", lineno)
        if key in raw:
            raise ParseError(f"duplicate key {key!r}", lineno)
        if not value:
            raise ParseError(f"empty value for {key!r}", lineno)
        raw[key] = (value, lineno)
    for key in REQUIRED:
        if key not in raw:
            raise ParseError(f"missing required key {key!r}")

    F = _money(*raw["fpl"])
    Q = _money(*raw["premium_annual"])
    I = _money(*raw["income"])
    if F.cents <= 0:
        raise ScenarioError(f"line {raw['fpl'][1]}: fpl must be positive")
    if Q.cents < 0:
        raise ScenarioError(f"line {raw['premium_annual'][1]}: premium_annual must be nonnegative")
    if I < Q:
        raise ScenarioError(f"line {raw['income'][1]}: income {I} is below premium_annual {Q}")

    sched_text, sched_line = raw.get("schedule", ("builtin:2018", 0))
    schedule = _schedule(sched_text, sched_line, base_dir)
    rounding = rounding_default
    if "rounding" in raw:
        try:
            rounding = RoundingMode.parse(raw["rounding"][0])
        except ParseError as exc:
            raise ParseError(str(exc), raw["rounding"][1]) from None
    tax = _tax(*raw["tax_brackets"]) if "tax_brackets" in raw else DEFAULT_TAX
    places = None
    if "percent_decimals" in raw:
        value, line = raw["percent_decimals"]
        if not value.isdigit():
            raise ParseError(f"percent_decimals must be a nonnegative integer, got {value!r}", line)
        places = int(value)
    fixed = None
    if "deduction" in raw:
        fixed = _money(*raw["deduction"])
        if not 0 <= fixed.cents <= Q.cents:
            raise ScenarioError(f"line {raw['deduction'][1]}: deduction must lie in [0, premium_annual]")
    scenario = Scenario(F, Q, I, schedule, rounding, tax, places)
    return ScenarioFile(scenario, "rounding" in raw, fixed, sched_text)


def load_scenario_file(path: str | Path, rounding_default: RoundingMode = RoundingMode.PENNY) -> ScenarioFile:
    path = Path(path)
    return parse_scenario(path.read_text(), path.parent, rounding_default)
