import pytest
from hypothesis import strategies as st

from ptcsolve import Money, PercentageSchedule, RoundingMode, Scenario, TaxFunction, builtin_2018
from ptcsolve.policy import Segment

from fractions import Fraction

ACCEPTANCE_REPORT: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_REPORT:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_REPORT:
            terminalreporter.write_line(line)


def dollars(x) -> Money:
    return Money.dollars(str(x))


def make(F, Q, I, schedule=None, rounding=RoundingMode.EXACT, **kw) -> Scenario:
    return Scenario(dollars(F), dollars(Q), dollars(I), schedule or builtin_2018(), rounding, **kw)


def constant(p: str) -> PercentageSchedule:
    return PercentageSchedule.from_rows([("1", "4", p, p)], f"flat-{p}")


@pytest.fixture
def brooklyn():
    return make(16240, 9697, 71150, rounding=RoundingMode.DOLLAR)


@pytest.fixture
def brooklyn_exact():
    return make(16240, 9697, 71150)


@pytest.fixture
def constant_case():
    """F=$10,000, Q=$5,000, I=$30,000, flat 5% schedule, exact rounding."""
    return make(10000, 5000, 30000, constant("0.05"))


@st.composite
def schedules(draw, max_segments=6):
    n = draw(st.integers(1, max_segments))
    inner = sorted(draw(st.sets(st.integers(101, 399), min_size=n - 1, max_size=n - 1)))
    edges = [Fraction(1)] + [Fraction(b, 100) for b in inner] + [Fraction(4)]
    values = sorted(draw(st.lists(st.integers(1, 999), min_size=2 * n, max_size=2 * n)))
    segs = [
        Segment(edges[i], edges[i + 1], Fraction(values[2 * i], 10**4), Fraction(values[2 * i + 1], 10**4))
        for i in range(n)
    ]
    return PercentageSchedule(tuple(segs), "random")


@st.composite
def tax_functions(draw):
    n = draw(st.integers(1, 3))
    thresholds = sorted(draw(st.sets(st.integers(0, 8_000_000), min_size=n, max_size=n)))
    rates = sorted(draw(st.lists(st.integers(5, 40), min_size=n, max_size=n)))
    return TaxFunction(tuple((Money(t), Fraction(r, 100)) for t, r in zip(thresholds, rates)))


@st.composite
def scenarios(draw, rounding=RoundingMode.EXACT):
    """Spans F in [$5k, $30k], Q in [$1k, $20k], I in [Q, 5F + Q] (cents)."""
    F = draw(st.integers(500_000, 3_000_000))
    Q = draw(st.integers(100_000, 2_000_000))
    I = draw(st.integers(Q, 5 * F + Q))
    return Scenario(Money(F), Money(Q), Money(I), draw(schedules()), rounding, draw(tax_functions()))
