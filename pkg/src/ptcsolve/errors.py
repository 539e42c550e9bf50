"""Exception types shared across the package."""


class PtcError(Exception):
    """Base class for all ptcsolve errors."""


class ParseError(PtcError, ValueError):
    """Malformed input text. Carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ScheduleError(PtcError, ValueError):
    """A percentage schedule violates tiling, monotonicity or codomain rules."""

    def __init__(self, message: str, segment: int | None = None, line: int | None = None):
        self.segment = segment
        self.line = line
        prefix = []
        if line is not None:
            prefix.append(f"line {line}")
        if segment is not None:
            prefix.append(f"segment {segment}")
        if prefix:
            message = f"{', '.join(prefix)}: {message}"
        super().__init__(message)


class ScenarioError(PtcError, ValueError):
    """Scenario inputs violate F > 0, Q >= 0 or I >= Q."""


class DomainError(PtcError, ValueError):
    """An argument lies outside the domain of the operation."""


class NotEligible(PtcError):
    """Modified income falls below the poverty line (m < 1)."""


class IterationCapError(PtcError):
    """The fixed-point iteration hit its cap without recurring."""
