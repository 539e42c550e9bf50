from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ptcsolve.errors import ParseError
from ptcsolve.money import Money, RoundingMode, format_fraction, parse_decimal, round_half_away


@pytest.mark.parametrize(
    "x, unit, expected",
    [
        (Fraction(5, 2), 1, 3),
        (Fraction(-5, 2), 1, -3),
        (Fraction(149, 1), 100, 100),
        (Fraction(150, 1), 100, 200),
        (Fraction(-150, 1), 100, -200),
        (Fraction(587490680, 100000), 100, 5900),
        (Fraction(24, 10), 1, 2),
    ],
)
def test_round_half_away(x, unit, expected):
    assert round_half_away(x, unit) == expected


def test_dollars_parsing():
    assert Money.dollars("71150") == Money(7_115_000)
    assert Money.dollars("9455.80") == Money(945_580)
    assert Money.dollars(12) == Money(1200)
    with pytest.raises(ParseError, match="more than 2 decimal"):
        Money.dollars("1.005")
    with pytest.raises(ParseError):
        Money.dollars("1e3")


def test_str():
    assert str(Money(382200)) == "$3,822.00"
    assert str(Money(-5)) == "-$0.05"
    assert Money(-5).plain() == "-0.05"


def test_money_rejects_float_cents():
    with pytest.raises(TypeError):
        Money(1.5)


def test_rounding_units():
    assert RoundingMode.DOLLAR.unit == 100
    assert RoundingMode.PENNY.unit == 1
    assert RoundingMode.parse(" Dollar ") is RoundingMode.DOLLAR
    with pytest.raises(ParseError):
        RoundingMode.parse("nickel")


@given(st.integers(-10**9, 10**9), st.integers(0, 8))
def test_decimal_roundtrip(n, places):
    x = Fraction(n, 10**places)
    assert parse_decimal(format_fraction(x)) == x


def test_format_fraction_rejects_repeating():
    with pytest.raises(ValueError):
        format_fraction(Fraction(1, 3))
