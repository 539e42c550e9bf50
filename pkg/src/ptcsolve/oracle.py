"""Brute-force maximizer of ``C(d) + T(I) - T(I - d)`` subject to the constraints.

Scans every ``d`` on a fixed grid. Segment lookup and tax liabilities are
exact integer arithmetic. Where the credit is exactly zero (m > 4, or clearly
clamped) the objective is exact as well. Elsewhere the credit is screened in
float64, and any grid point whose feasibility slack or objective lies within a
small band of the decision threshold is re-decided with exact rationals
through :mod:`ptcsolve.credit`. Results are independent of the chunking.
"""

from __future__ import annotations

from dataclasses import dataclass
import math
from fractions import Fraction

import numpy as np

from ptcsolve.credit import Scenario, credit_amount, is_feasible, objective
from ptcsolve.errors import DomainError, NotEligible
from ptcsolve.money import Money, RoundingMode

# float64 error on these magnitudes (< 1e9 cents) is far below 1e-6 cents
_BAND = 1e-3
_INT64_SAFE = 2**62


@dataclass(frozen=True)
class OracleResult:
    deduction: Money
    credit: Money
    objective_value: Money
    grid_step: Money
    candidates_evaluated: int
    exact_objective: Fraction


class _Vectorized:
    """Float screen of C(d), plus exact integer tax liabilities scaled by ``tax_den``."""

    def __init__(self, scenario: Scenario):
        sched = scenario.schedule
        self.F = scenario.F
        self.I = scenario.I
        self.Q = scenario.Q
        self.bp_num = [b.numerator for b in sched.breakpoints]
        self.bp_den = [b.denominator for b in sched.breakpoints]
        segs = sched.segments
        self.m0 = np.array([float(s.m_start) for s in segs])
        self.p0 = np.array([float(s.p_start) for s in segs])
        self.slope = np.array([float(s.slope) for s in segs])
        tax = scenario.tax.brackets
        self.tax_den = math.lcm(*(r.denominator for _, r in tax))
        self.tax_coef = [int(r * self.tax_den) for _, r in tax]
        self.tax_lo = [t.cents for t, _ in tax]
        self.tax_width = [tax[i + 1][0].cents - tax[i][0].cents if i + 1 < len(tax) else None for i in range(len(tax))]
        self.tax_obj = max(self.tax_coef) * (self.I + 1) * len(tax) >= _INT64_SAFE

    def segment_index(self, M: np.ndarray) -> np.ndarray:
        idx = np.zeros(M.shape, dtype=np.int64)
        for num, den in zip(self.bp_num, self.bp_den):
            if (int(M.max(initial=0)) + 1) * den >= _INT64_SAFE or num * self.F >= _INT64_SAFE:
                idx += (M.astype(object) * den >= num * self.F).astype(np.int64)
            else:
                idx += (M * den >= num * self.F).astype(np.int64)
        return idx

    def credit(self, d: np.ndarray):
        """Float C(d), eligibility mask, and a mask of points whose exact credit is surely 0."""
        M = self.I - d
        eligible = M >= self.F
        above = M > 4 * self.F
        seg = self.segment_index(M)
        Mf = M.astype(np.float64)
        m = Mf / self.F
        p = self.p0[seg] + self.slope[seg] * (m - self.m0[seg])
        raw = self.Q - p * Mf
        zero = above | (raw < -_BAND)
        c = np.where(zero, 0.0, np.maximum(raw, 0.0))
        return c, eligible, zero

    def liability_num(self, x: np.ndarray) -> np.ndarray:
        """Exact ``T(x) * tax_den`` for integer cents ``x``."""
        x = x.astype(object) if self.tax_obj else x
        total = np.zeros(x.shape, dtype=x.dtype)
        for coef, lo, width in zip(self.tax_coef, self.tax_lo, self.tax_width):
            span = np.clip(x - lo, 0, width)
            total = total + span * coef
        return total


def _scan_chunk(scenario: Scenario, vec: _Vectorized, d: np.ndarray, t_income_num: int):
    """Best (exact objective, d) in one chunk, or None if nothing feasible."""
    c, eligible, zero = vec.credit(d)
    saved_num = t_income_num - vec.liability_num(scenario.I - d)
    candidates = []

    # exact path: credit is exactly 0, feasibility is d <= Q, objective is the tax saved
    exact = eligible & zero
    if exact.any():
        vals = saved_num[exact]
        top = vals.max()
        d_top = int(d[exact][vals == top].max())
        candidates.append((Fraction(int(top), vec.tax_den), d_top))

    rest = eligible & ~zero
    slack = scenario.Q - d - c
    feasible = rest & (slack >= 0)
    for i in np.flatnonzero(rest & (np.abs(slack) <= _BAND)):
        feasible[i] = is_feasible(scenario, int(d[i]), RoundingMode.EXACT)
    if feasible.any():
        dd = d[feasible]
        obj = c[feasible] + saved_num[feasible].astype(np.float64) / vec.tax_den
        top = obj.max()
        for cand in dd[obj >= top - _BAND]:
            candidates.append((objective(scenario, int(cand)), int(cand)))

    if not candidates:
        return None
    return max(candidates)


def oracle_solve(scenario: Scenario, grid_step: Money = Money(1), chunk: int = 1 << 18) -> OracleResult:
    """Exhaustive scan of ``d = 0, step, 2*step, ... <= Q``.

    Among feasible grid points the largest objective wins, ties going to the
    larger deduction. The objective is evaluated without intermediate rounding;
    the reported credit is rounded per ``scenario.rounding``.
    """
    step = grid_step.cents
    if step <= 0:
        raise DomainError("grid step must be positive")
    if scenario.percent_places is not None:
        raise DomainError("oracle evaluates the unrounded schedule; percent_places is not supported")
    vec = _Vectorized(scenario)
    t_income_num = int(scenario.tax.liability(scenario.I) * vec.tax_den)
    n_points = scenario.Q // step + 1
    best = None
    for start in range(0, n_points, chunk):
        d = np.arange(start, min(start + chunk, n_points), dtype=np.int64) * step
        found = _scan_chunk(scenario, vec, d, t_income_num)
        if found is not None and (best is None or found[0] > best[0] or (found[0] == best[0] and found[1] > best[1])):
            best = found
    if best is None:
        raise NotEligible("no grid deduction leaves modified income at or above the poverty line")
    val, d = best
    c_exact = credit_amount(scenario, d, RoundingMode.EXACT)
    return OracleResult(
        deduction=Money(d),
        credit=Money.from_cents(c_exact, scenario.rounding.unit),
        objective_value=Money.from_cents(val),
        grid_step=grid_step,
        candidates_evaluated=n_points,
        exact_objective=val,
    )
