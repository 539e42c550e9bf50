"""Applicable-percentage schedules.

A schedule is a monotone, right-continuous piecewise-linear map from the
income ratio ``m = M / F`` on ``[1, 4]`` to a fraction in ``(0, 0.1)``.
Segments are half-open ``[m_start, m_end)`` except the last, which is closed
at 4, so a jump at a breakpoint always takes the right-hand value.

Config format (one segment per line)::

    year: 2018
    # m_start m_end p_start p_end
    1    1.33 0.0201 0.0201
    1.33 1.5  0.0302 0.0403
    ...
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from ptcsolve.errors import DomainError, ParseError, ScheduleError
from ptcsolve.money import format_fraction, parse_decimal, round_half_away

M_LOW = Fraction(1)
M_HIGH = Fraction(4)
P_CEILING = Fraction(1, 10)


@dataclass(frozen=True)
class Segment:
    m_start: Fraction
    m_end: Fraction
    p_start: Fraction
    p_end: Fraction

    def value(self, m: Fraction) -> Fraction:
        if self.p_start == self.p_end:
            return self.p_start
        return self.p_start + (self.p_end - self.p_start) * (m - self.m_start) / (self.m_end - self.m_start)

    @property
    def slope(self) -> Fraction:
        return (self.p_end - self.p_start) / (self.m_end - self.m_start)


def _check(segments: tuple[Segment, ...], lines: list[int] | None = None) -> None:
    def fail(msg: str, i: int):
        raise ScheduleError(msg, segment=i + 1, line=lines[i] if lines else None)

    if not segments:
        raise ScheduleError("schedule has no segments")
    if segments[0].m_start != M_LOW:
        fail(f"first segment starts at {format_fraction(segments[0].m_start)}, expected 1", 0)
    if segments[-1].m_end != M_HIGH:
        fail(f"last segment ends at {format_fraction(segments[-1].m_end)}, expected 4", len(segments) - 1)
    for i, seg in enumerate(segments):
        if not seg.m_start < seg.m_end:
            fail(f"empty or reversed domain [{format_fraction(seg.m_start)}, {format_fraction(seg.m_end)})", i)
        for p in (seg.p_start, seg.p_end):
            if not 0 < p < P_CEILING:
                fail(f"value {format_fraction(p)} outside (0, 0.1)", i)
        if seg.p_end < seg.p_start:
            fail("decreasing within segment", i)
        if i:
            prev = segments[i - 1]
            if prev.m_end < seg.m_start:
                fail(f"gap [{format_fraction(prev.m_end)},{format_fraction(seg.m_start)})", i)
            if prev.m_end > seg.m_start:
                fail(f"overlaps previous segment at [{format_fraction(seg.m_start)},{format_fraction(prev.m_end)})", i)
            if seg.p_start < prev.p_end:
                fail(
                    f"drops from {format_fraction(prev.p_end)} to {format_fraction(seg.p_start)} "
                    f"at m={format_fraction(seg.m_start)} (not monotone)",
                    i,
                )


@dataclass(frozen=True)
class PercentageSchedule:
    segments: tuple[Segment, ...]
    year_label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        _check(self.segments)

    @classmethod
    def from_rows(cls, rows, year_label: str = "") -> PercentageSchedule:
        """Build from ``(m_start, m_end, p_start, p_end)`` rows of decimal strings or rationals."""
        segs = []
        for row in rows:
            vals = [parse_decimal(v) if isinstance(v, str) else Fraction(v) for v in row]
            segs.append(Segment(*vals))
        return cls(tuple(segs), year_label)

    @property
    def breakpoints(self) -> tuple[Fraction, ...]:
        """Interior breakpoints, ascending."""
        return tuple(s.m_start for s in self.segments[1:])

    def segment_for(self, m: Fraction) -> Segment:
        if not M_LOW <= m <= M_HIGH:
            raise DomainError(f"income ratio {float(m):.6f} outside [1, 4]")
        for seg in self.segments:
            if m < seg.m_end:
                return seg
        return self.segments[-1]

    def __call__(self, m: Rational | int) -> Fraction:
        m = Fraction(m)
        return self.segment_for(m).value(m)


def eval_percentage(schedule: PercentageSchedule, m: Rational | int, places: int | None = None) -> Fraction:
    """Applicable percentage at ratio ``m``.

    With ``places`` set (4 for IRS worksheets) the value is rounded half away
    from zero to that many decimal places; otherwise it is exact.
    """
    p = schedule(m)
    if places is not None:
        p = Fraction(round_half_away(p * 10**places), 10**places)
    return p


_ROWS_2018 = [
    ("1", "1.33", "0.0201", "0.0201"),
    ("1.33", "1.5", "0.0302", "0.0403"),
    ("1.5", "2", "0.0403", "0.0634"),
    ("2", "2.5", "0.0634", "0.0810"),
    ("2.5", "3", "0.0810", "0.0956"),
    ("3", "4", "0.0956", "0.0956"),
]

BUILTINS = {"2018": lambda: PercentageSchedule.from_rows(_ROWS_2018, "2018")}


def builtin_2018() -> PercentageSchedule:
    return BUILTINS["2018"]()


def builtin(name: str) -> PercentageSchedule:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise ScheduleError(f"no builtin schedule {name!r}; known: {', '.join(sorted(BUILTINS))}") from None


def load_schedule(source: str) -> PercentageSchedule:
    """Parse schedule config text. Violations are reported with line numbers."""
    year = ""
    segs: list[Segment] = []
    lines: list[int] = []
    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("year:"):
            if year:
                raise ParseError("duplicate year header", lineno)
            year = line[5:].strip()
            if not year:
                raise ParseError("empty year header", lineno)
            continue
        fields = line.split()
        if len(fields) != 4:
            raise ParseError(f"expected 4 fields 'm_start m_end p_start p_end', got {len(fields)}", lineno)
        try:
            vals = [parse_decimal(f) for f in fields]
        except ParseError as exc:
            raise ParseError(str(exc), lineno) from None
        segs.append(Segment(*vals))
        lines.append(lineno)
    if not segs:
        raise ParseError("no segments found")
    _check(tuple(segs), lines)
    return PercentageSchedule(tuple(segs), year)


def dump_schedule(schedule: PercentageSchedule) -> str:
    out = []
    if schedule.year_label:
        out.append(f"year: {schedule.year_label}")
    out.append("# m_start m_end p_start p_end")
    for s in schedule.segments:
        out.append(" ".join(format_fraction(v) for v in (s.m_start, s.m_end, s.p_start, s.p_end)))
    return "\n".join(out) + "\n"
