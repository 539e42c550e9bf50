"""The four (D, C) procedures and the closed-form edge cases.

* :func:`irs_fixed_point` - the IRS iteration ``(C, D) <- (C(D), Q - C(D))``
  from ``(0, Q)``, with exact cycle detection on post-rounding states.
* :func:`simplified_procedure` - the IRS fallback ``(D_2, C_3)``.
* :func:`software_extension` - ``D_0 = liminf D_n`` and ``C(D_0)``.
* :func:`bisection` - bracket ``[max(0, I - 4F), min(Q, I - F)]`` halved on the
  sign of ``d + C(d) - Q``; the left endpoint stays feasible.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from fractions import Fraction

from ptcsolve.credit import Scenario, credit_amount, evaluate_credit
from ptcsolve.errors import DomainError, IterationCapError, NotEligible
from ptcsolve.money import Money, RoundingMode, floor_to, round_half_away

log = logging.getLogger(__name__)

DEFAULT_EPSILON0 = Money(100)
DEFAULT_CAP = 1000
DEFAULT_TOLERANCE = Fraction(1, 2)  # cents


class TraceStatus(enum.Enum):
    CONVERGED = "converged"
    CYCLE = "cycle"
    CAP = "cap"


class Regime(enum.Enum):
    THEOREM_BRACKET = "theorem-bracket"
    FULLY_FEASIBLE = "fully-feasible"
    NO_FEASIBLE_CREDIT = "no-feasible-credit"
    ABOVE_FOUR_F = "above-four-f"
    NOT_ELIGIBLE = "not-eligible"


class Method(enum.Enum):
    IRS_ITERATION = "irs"
    SIMPLIFIED = "simplified"
    SOFTWARE_EXTENSION = "extension"
    BISECTION = "bisection"
    CLOSED_FORM_EDGE = "closed-form"


@dataclass
class IterationTrace:
    """Iterates ``(C_n, D_n)``; index fields are 1-based like ``n``."""

    points: list[tuple[Money, Money]]
    status: TraceStatus
    epsilon0: Money = DEFAULT_EPSILON0
    cycle_start: int | None = None
    cycle_period: int | None = None
    converged_at: int | None = None

    @property
    def label(self) -> str:
        if self.status is TraceStatus.CONVERGED:
            return "converged"
        if self.status is TraceStatus.CYCLE:
            return f"cycle:{self.cycle_period}"
        return "cap"

    def point(self, n: int) -> tuple[Money, Money]:
        return self.points[n - 1]

    def cycle_points(self) -> list[tuple[Money, Money]]:
        if self.cycle_start is None:
            raise IterationCapError("iteration did not recur; no terminal cycle")
        s, p = self.cycle_start, self.cycle_period
        return self.points[s - 1 : s - 1 + p]

    @property
    def diameter(self) -> Money | None:
        """Sup-norm diameter of the terminal cycle."""
        if self.cycle_start is None:
            return None
        pts = self.cycle_points()
        return Money(max(_dist(a, b) for a in pts for b in pts))


@dataclass(frozen=True)
class BracketStep:
    """One bisection bracket ``[a, b]`` (cents) and its midpoint, if one was taken."""

    n: int
    a: Fraction
    b: Fraction
    midpoint: Fraction | None = None


@dataclass
class SolverResult:
    deduction: Money
    credit: Money
    method: Method
    edge_tag: str | None = None
    regime: Regime | None = None
    trace: IterationTrace | None = None
    brackets: list[BracketStep] = field(default_factory=list)
    exact_deduction: Fraction | None = None
    credit_adjusted: bool = False

    @property
    def method_label(self) -> str:
        if self.method is Method.CLOSED_FORM_EDGE:
            return f"closed-form:{self.edge_tag}"
        return self.method.value


def _dist(a: tuple[Money, Money], b: tuple[Money, Money]) -> int:
    return max(abs(a[0].cents - b[0].cents), abs(a[1].cents - b[1].cents))


def _step(scenario: Scenario, d: Money) -> tuple[Money, Money]:
    c = Money.from_cents(credit_amount(scenario, d))
    return c, scenario.premium - c


def irs_fixed_point(scenario: Scenario, epsilon0: Money = DEFAULT_EPSILON0, cap: int = DEFAULT_CAP) -> IterationTrace:
    """Run the IRS iteration until a state recurs or ``cap`` points are recorded.

    States are post-rounding Money pairs, so the orbit is eventually periodic
    and recurrence is detected exactly. Convergence in the IRS sense holds when
    some ``N`` has every later state within ``epsilon0`` (sup norm) of state
    ``N``; for an eventually periodic orbit the later states are the tail up to
    the cycle plus the cycle itself, so this is decidable.
    """
    if epsilon0.cents <= 0:
        raise DomainError("epsilon0 must be positive")
    if cap < 1:
        raise DomainError("cap must be at least 1")
    points = [(Money(0), scenario.premium)]
    seen = {points[0]: 1}
    while len(points) < cap:
        nxt = _step(scenario, points[-1][1])
        points.append(nxt)
        if nxt in seen:
            s = seen[nxt]
            p = len(points) - s
            trace = IterationTrace(points, TraceStatus.CYCLE, epsilon0, s, p)
            trace.converged_at = _irs_converged_at(points, s, p, epsilon0.cents)
            if trace.converged_at is not None:
                trace.status = TraceStatus.CONVERGED
            return trace
        seen[nxt] = len(points)
    return IterationTrace(points, TraceStatus.CAP, epsilon0)


def _irs_converged_at(points, s: int, p: int, eps: int) -> int | None:
    cycle = points[s - 1 : s - 1 + p]
    for n in range(1, s + p):
        later = points[n : s - 1 + p] + cycle
        if all(_dist(points[n - 1], q) < eps for q in later):
            return n
    return None


def irs_solution(trace: IterationTrace) -> SolverResult | None:
    """The IRS answer when the iteration converged, else None.

    The limit is reported: the state at the start of the terminal cycle (the
    fixed point when the period is 1).
    """
    if trace.status is not TraceStatus.CONVERGED:
        return None
    c, d = trace.point(trace.cycle_start)
    return SolverResult(d, c, Method.IRS_ITERATION, trace=trace)


def simplified_procedure(scenario: Scenario) -> SolverResult:
    """Accept ``D_2`` as the deduction and ``C_3`` as the credit. No feasibility claim."""
    p1 = (Money(0), scenario.premium)
    p2 = _step(scenario, p1[1])
    p3 = _step(scenario, p2[1])
    trace = IterationTrace([p1, p2, p3], TraceStatus.CAP)
    return SolverResult(p2[1], p3[0], Method.SIMPLIFIED, trace=trace)


def software_extension(scenario: Scenario, epsilon0: Money = DEFAULT_EPSILON0, cap: int = DEFAULT_CAP) -> SolverResult:
    """Take ``D_0`` = the smallest deduction on the terminal cycle and ``C(D_0)``."""
    trace = irs_fixed_point(scenario, epsilon0, cap)
    if trace.status is TraceStatus.CAP:
        raise IterationCapError(f"no recurrence within {cap} iterates; liminf undetermined")
    d0 = min(d for _, d in trace.cycle_points())
    c0 = Money.from_cents(credit_amount(scenario, d0))
    return SolverResult(d0, c0, Method.SOFTWARE_EXTENSION, trace=trace)


def bracket_ends(scenario: Scenario) -> tuple[int, int]:
    """``(A_1, B_1) = (max(0, I - 4F), min(Q, I - F))`` in cents."""
    return max(0, scenario.I - 4 * scenario.F), min(scenario.Q, scenario.I - scenario.F)


def _g(scenario: Scenario, d) -> Fraction:
    return d + credit_amount(scenario, d, RoundingMode.EXACT)


def classify_regime(scenario: Scenario) -> Regime:
    """Regime from direct evaluation of the bracket conditions (exact arithmetic)."""
    if scenario.I < scenario.F:
        return Regime.NOT_ELIGIBLE
    if scenario.I - scenario.Q > 4 * scenario.F:
        return Regime.ABOVE_FOUR_F
    a1, b1 = bracket_ends(scenario)
    if _g(scenario, b1) <= scenario.Q:
        return Regime.FULLY_FEASIBLE
    if _g(scenario, a1) > scenario.Q:
        return Regime.NO_FEASIBLE_CREDIT
    return Regime.THEOREM_BRACKET


def _finalize(scenario: Scenario, d_exact: Fraction, floor_at: int) -> tuple[Money, Money, bool]:
    """Round D down to the mode's unit (not below ``floor_at`` cents), then C(D) and the D + C <= Q check."""
    unit = scenario.rounding.unit
    d = floor_to(d_exact, unit)
    if d < floor_at:
        d = floor_to(d_exact, 1)
    c = round_half_away(credit_amount(scenario, d), 1)
    adjusted = False
    if d + c > scenario.Q:
        c -= unit
        adjusted = True
    return Money(d), Money(c), adjusted


def bisection(scenario: Scenario, tolerance: Fraction = DEFAULT_TOLERANCE, max_steps: int = 200) -> SolverResult:
    """Largest feasible deduction by bisection on ``d + C(d) <= Q``.

    ``tolerance`` is in cents. The bracket is evaluated with exact arithmetic;
    the scenario's rounding applies to the reported pair only.
    """
    tolerance = Fraction(tolerance)
    if tolerance <= 0:
        raise DomainError("tolerance must be positive")
    regime = classify_regime(scenario)
    if regime is Regime.NOT_ELIGIBLE:
        raise NotEligible(f"income {scenario.income} is below the poverty line {scenario.poverty_line}")
    a1, b1 = bracket_ends(scenario)

    if regime is Regime.ABOVE_FOUR_F:
        return SolverResult(scenario.premium, Money(0), Method.CLOSED_FORM_EDGE, "above-four-f", regime, exact_deduction=Fraction(scenario.Q))
    if regime is Regime.NO_FEASIBLE_CREDIT:
        # every d in [A_1, B_1] overshoots Q; feasible deductions are those with m > 4
        d = floor_to(a1 - 1, scenario.rounding.unit)
        return SolverResult(Money(d), Money(0), Method.CLOSED_FORM_EDGE, "no-feasible-credit", regime, exact_deduction=Fraction(d))
    if regime is Regime.FULLY_FEASIBLE:
        d, c, adj = _finalize(scenario, Fraction(b1), a1)
        return SolverResult(d, c, Method.CLOSED_FORM_EDGE, "fully-feasible", regime, exact_deduction=Fraction(b1), credit_adjusted=adj)

    a, b = Fraction(a1), Fraction(b1)
    history = []
    n = 1
    while True:
        if b - a < tolerance:
            history.append(BracketStep(n, a, b))
            break
        if n > max_steps:
            raise IterationCapError(f"bisection did not reach tolerance in {max_steps} steps")
        e = (a + b) / 2
        history.append(BracketStep(n, a, b, e))
        if _g(scenario, e) <= scenario.Q:
            a = e
        else:
            b = e
        n += 1
    log.debug("bisection finished after %d brackets, A=%s", len(history), a)
    d, c, adj = _finalize(scenario, a, a1)
    return SolverResult(d, c, Method.BISECTION, None, regime, brackets=history, exact_deduction=a, credit_adjusted=adj)


def solve(scenario: Scenario, method: str, **kw) -> SolverResult:
    """Dispatch by method name: irs, simplified, extension, bisection."""
    if method == "irs":
        trace = irs_fixed_point(scenario, kw.get("epsilon0", DEFAULT_EPSILON0), kw.get("cap", DEFAULT_CAP))
        result = irs_solution(trace)
        if result is None:
            raise IterationCapError(f"IRS iteration did not converge ({trace.label})")
        return result
    if method == "simplified":
        return simplified_procedure(scenario)
    if method == "extension":
        return software_extension(scenario, kw.get("epsilon0", DEFAULT_EPSILON0), kw.get("cap", DEFAULT_CAP))
    if method == "bisection":
        return bisection(scenario, kw.get("tolerance", DEFAULT_TOLERANCE))
    raise ValueError(f"unknown method {method!r}")


__all__ = [
    "BracketStep",
    "IterationTrace",
    "Method",
    "Regime",
    "SolverResult",
    "TraceStatus",
    "bisection",
    "bracket_ends",
    "classify_regime",
    "evaluate_credit",
    "irs_fixed_point",
    "irs_solution",
    "simplified_procedure",
    "software_extension",
    "solve",
]
