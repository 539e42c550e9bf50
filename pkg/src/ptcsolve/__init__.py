"""Premium tax credit / self-employed health insurance deduction solvers."""

from ptcsolve.credit import (
    Scenario,
    TaxFunction,
    credit_C,
    effective_rate_benefit,
    is_feasible,
    modified_income,
)
from ptcsolve.errors import (
    DomainError,
    IterationCapError,
    NotEligible,
    ParseError,
    PtcError,
    ScenarioError,
    ScheduleError,
)
from ptcsolve.money import Money, RoundingMode
from ptcsolve.oracle import OracleResult, oracle_solve
from ptcsolve.policy import PercentageSchedule, Segment, builtin_2018, eval_percentage, load_schedule
from ptcsolve.solvers import (
    IterationTrace,
    Method,
    Regime,
    SolverResult,
    TraceStatus,
    bisection,
    classify_regime,
    irs_fixed_point,
    simplified_procedure,
    software_extension,
)
from ptcsolve.sweep import SweepRecord, divergence_intervals, sweep_income

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "IterationCapError",
    "IterationTrace",
    "Method",
    "Money",
    "NotEligible",
    "OracleResult",
    "ParseError",
    "PercentageSchedule",
    "PtcError",
    "Regime",
    "RoundingMode",
    "Scenario",
    "ScenarioError",
    "ScheduleError",
    "Segment",
    "SolverResult",
    "SweepRecord",
    "TaxFunction",
    "TraceStatus",
    "bisection",
    "builtin_2018",
    "classify_regime",
    "credit_C",
    "divergence_intervals",
    "effective_rate_benefit",
    "eval_percentage",
    "irs_fixed_point",
    "is_feasible",
    "load_schedule",
    "modified_income",
    "oracle_solve",
    "simplified_procedure",
    "software_extension",
    "sweep_income",
]
