"""Integer-cent money and half-away-from-zero rounding on exact rationals."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from numbers import Rational

from ptcsolve.errors import ParseError


class RoundingMode(enum.Enum):
    EXACT = "exact"
    PENNY = "penny"
    DOLLAR = "dollar"

    @property
    def unit(self) -> int:
        """Rounding quantum in cents. Exact mode reports at cent resolution."""
        return 100 if self is RoundingMode.DOLLAR else 1

    @classmethod
    def parse(cls, text: str) -> RoundingMode:
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ParseError(f"unknown rounding mode {text!r} (expected exact|penny|dollar)") from None


def round_half_away(x: Rational | int, unit: int = 1) -> int:
    """Round ``x`` (in cents) to a multiple of ``unit`` cents, ties away from zero."""
    q = Fraction(x) / unit
    n = math.floor(abs(q) + Fraction(1, 2))
    return (n if q >= 0 else -n) * unit


def floor_to(x: Rational | int, unit: int = 1) -> int:
    return math.floor(Fraction(x) / unit) * unit


def parse_decimal(text: str) -> Fraction:
    """Parse a plain decimal literal exactly. Exponents, NaN and infinities are rejected."""
    text = text.strip()
    if not text or any(c in text for c in "eEnNiI"):
        raise ParseError(f"not a decimal literal: {text!r}")
    try:
        return Fraction(Decimal(text))
    except (InvalidOperation, ValueError):
        raise ParseError(f"not a decimal literal: {text!r}") from None


def format_fraction(x: Fraction) -> str:
    """Render a rational with a terminating decimal expansion exactly."""
    x = Fraction(x)
    den = x.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        raise ValueError(f"{x} has no terminating decimal expansion")
    places = max(twos, fives)
    scaled = x * 10**places
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled.numerator)).rjust(places + 1, "0")
    if places == 0:
        return sign + digits
    head, tail = digits[:-places], digits[-places:].rstrip("0")
    return sign + head + ("." + tail if tail else "")


@dataclass(frozen=True, order=True)
class Money:
    cents: int

    def __post_init__(self):
        if isinstance(self.cents, bool) or not isinstance(self.cents, int):
            raise TypeError(f"Money needs integer cents, got {self.cents!r}")

    @classmethod
    def dollars(cls, value: str | int | Decimal) -> Money:
        """Exact conversion from a dollar amount; more than 2 decimal places is an error."""
        if isinstance(value, int):
            return cls(value * 100)
        frac = parse_decimal(str(value))
        cents = frac * 100
        if cents.denominator != 1:
            raise ParseError(f"amount {value!r} has more than 2 decimal places")
        return cls(int(cents))

    @classmethod
    def from_cents(cls, value: Rational | int, unit: int = 1) -> Money:
        """Round a rational number of cents half away from zero at ``unit``."""
        return cls(round_half_away(value, unit))

    def as_fraction(self) -> Fraction:
        return Fraction(self.cents)

    def to_decimal(self) -> Decimal:
        return Decimal(self.cents).scaleb(-2)

    def __add__(self, other: Money) -> Money:
        if not isinstance(other, Money):
            return NotImplemented
        return Money(self.cents + other.cents)

    def __sub__(self, other: Money) -> Money:
        if not isinstance(other, Money):
            return NotImplemented
        return Money(self.cents - other.cents)

    def __neg__(self) -> Money:
        return Money(-self.cents)

    def __abs__(self) -> Money:
        return Money(abs(self.cents))

    def __str__(self) -> str:
        sign = "-" if self.cents < 0 else ""
        whole, part = divmod(abs(self.cents), 100)
        return f"{sign}${whole:,}.{part:02d}"

    def plain(self) -> str:
        """Dollar string without currency symbol or separators, e.g. ``-12.05``."""
        sign = "-" if self.cents < 0 else ""
        whole, part = divmod(abs(self.cents), 100)
        return f"{sign}{whole}.{part:02d}"


ZERO = Money(0)
