"""Credit function, modified income, constraints and objective for one household.

All internal amounts are exact rationals in cents. Public functions that take
or return dollars use :class:`~ptcsolve.money.Money`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

from ptcsolve.errors import DomainError, NotEligible, ScenarioError
from ptcsolve.money import Money, RoundingMode, round_half_away
from ptcsolve.policy import M_HIGH, M_LOW, PercentageSchedule, eval_percentage


@dataclass(frozen=True)
class TaxFunction:
    """Marginal-bracket income tax.

    ``brackets`` holds ``(threshold, rate)`` pairs; ``rate`` applies to income
    above ``threshold`` up to the next threshold. Income below the first
    threshold is untaxed.
    """

    brackets: tuple[tuple[Money, Fraction], ...]

    def __post_init__(self):
        brackets = tuple((t, Fraction(r)) for t, r in self.brackets)
        object.__setattr__(self, "brackets", brackets)
        if not brackets:
            raise ScenarioError("tax function needs at least one bracket")
        for i, (threshold, rate) in enumerate(brackets):
            if not 0 <= rate <= 1:
                raise ScenarioError(f"bracket {i + 1}: rate {float(rate)} outside [0, 1]")
            if threshold.cents < 0:
                raise ScenarioError(f"bracket {i + 1}: negative threshold")
            if i and threshold <= brackets[i - 1][0]:
                raise ScenarioError(f"bracket {i + 1}: thresholds must increase")

    @classmethod
    def flat(cls, rate: Rational | str = Fraction(1, 5)) -> TaxFunction:
        return cls(((Money(0), Fraction(rate)),))

    def liability(self, income: Rational | int) -> Fraction:
        """Tax on ``income`` cents, exact."""
        income = Fraction(income)
        total = Fraction(0)
        for i, (threshold, rate) in enumerate(self.brackets):
            lo = threshold.cents
            if income <= lo:
                break
            hi = self.brackets[i + 1][0].cents if i + 1 < len(self.brackets) else None
            top = income if hi is None else min(income, hi)
            total += rate * (top - lo)
        return total

    def __call__(self, income: Money) -> Money:
        return Money.from_cents(self.liability(income.cents))


DEFAULT_TAX = TaxFunction.flat()


@dataclass(frozen=True)
class Scenario:
    poverty_line: Money
    premium: Money
    income: Money
    schedule: PercentageSchedule
    rounding: RoundingMode = RoundingMode.EXACT
    tax: TaxFunction = field(default=DEFAULT_TAX)
    # 4 reproduces the IRS worksheet's 4-decimal applicable figure
    percent_places: int | None = None

    def __post_init__(self):
        if self.poverty_line.cents <= 0:
            raise ScenarioError(f"poverty line must be positive, got {self.poverty_line}")
        if self.premium.cents < 0:
            raise ScenarioError(f"premium must be nonnegative, got {self.premium}")
        if self.income < self.premium:
            raise ScenarioError(f"income {self.income} is below the premium {self.premium}")

    @property
    def F(self) -> int:
        return self.poverty_line.cents

    @property
    def Q(self) -> int:
        return self.premium.cents

    @property
    def I(self) -> int:  # noqa: E743
        return self.income.cents

    def with_income(self, income: Money) -> Scenario:
        return Scenario(self.poverty_line, self.premium, income, self.schedule, self.rounding, self.tax, self.percent_places)

    def with_rounding(self, rounding: RoundingMode) -> Scenario:
        return Scenario(self.poverty_line, self.premium, self.income, self.schedule, rounding, self.tax, self.percent_places)


def _cents(d) -> Fraction:
    if isinstance(d, Money):
        return Fraction(d.cents)
    return Fraction(d)


@dataclass(frozen=True)
class CreditEval:
    """Breakdown of one evaluation of the credit function (amounts in cents)."""

    deduction: Fraction
    modified_income: Fraction
    ratio: Fraction
    percent: Fraction | None
    contribution: Fraction | None
    credit: Fraction
    clamped: bool

    @property
    def above_four(self) -> bool:
        return self.ratio > M_HIGH


def evaluate_credit(scenario: Scenario, d, rounding: RoundingMode | None = None) -> CreditEval:
    """Evaluate C(d). ``d`` may be Money or a rational number of cents.

    Raises :class:`NotEligible` when ``(I - d) / F < 1``.
    """
    rounding = scenario.rounding if rounding is None else rounding
    d = _cents(d)
    if not 0 <= d <= scenario.Q:
        raise DomainError(f"deduction {float(d) / 100:.2f} outside [0, {scenario.premium.plain()}]")
    M = scenario.I - d
    m = M / scenario.F
    if m < M_LOW:
        raise NotEligible(f"modified income {float(M) / 100:,.2f} is below the poverty line {scenario.poverty_line}")
    if m > M_HIGH:
        return CreditEval(d, M, m, None, None, Fraction(0), False)
    p = eval_percentage(scenario.schedule, m, scenario.percent_places)
    contribution = p * M
    if rounding is not RoundingMode.EXACT:
        contribution = Fraction(round_half_away(contribution, rounding.unit))
    credit = scenario.Q - contribution
    if rounding is not RoundingMode.EXACT:
        credit = Fraction(round_half_away(credit, rounding.unit))
    clamped = credit < 0
    return CreditEval(d, M, m, p, contribution, max(credit, Fraction(0)), clamped)


def credit_amount(scenario: Scenario, d, rounding: RoundingMode | None = None) -> Fraction:
    """C(d) in cents as an exact rational (fractional cents only in exact mode)."""
    return evaluate_credit(scenario, d, rounding).credit


def credit_C(scenario: Scenario, d: Money, rounding: RoundingMode | None = None) -> Money:
    """C(d) as Money; exact-mode values are rounded to the cent only here."""
    return Money.from_cents(credit_amount(scenario, d, rounding))


def modified_income(scenario: Scenario, d: Money) -> Money:
    if not 0 <= d.cents <= scenario.Q:
        raise DomainError(f"deduction {d} outside [0, {scenario.premium}]")
    return scenario.income - d


def is_feasible(scenario: Scenario, d, rounding: RoundingMode | None = None) -> bool:
    """True iff 0 <= d <= Q, (I - d) / F >= 1 and d + C(d) <= Q. Never raises on range."""
    d = _cents(d)
    if not 0 <= d <= scenario.Q:
        return False
    if scenario.I - d < scenario.F:
        return False
    return d + credit_amount(scenario, d, rounding) <= scenario.Q


def tax_saved(scenario: Scenario, d) -> Fraction:
    """T(I) - T(I - d) in exact cents."""
    d = _cents(d)
    if not 0 <= d <= scenario.I:
        raise DomainError(f"deduction {float(d) / 100:.2f} outside [0, income]")
    return scenario.tax.liability(scenario.I) - scenario.tax.liability(scenario.I - d)


def effective_rate_benefit(scenario: Scenario, d: Money) -> Money:
    """Tax saved by deducting ``d``: the effective rate times ``d``."""
    return Money.from_cents(tax_saved(scenario, d))


def objective(scenario: Scenario, d) -> Fraction:
    """C(d) + T(I) - T(I - d), exact, with C evaluated unrounded."""
    return credit_amount(scenario, d, RoundingMode.EXACT) + tax_saved(scenario, d)
