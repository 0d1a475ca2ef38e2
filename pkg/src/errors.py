"""
Exception hierarchy for the witness toolkit

Every error raised on purpose by the library derives from WitnessError so the
CLI can map it to a stable exit code.
"""

from typing import Optional


class WitnessError(Exception):
    """Base class for all toolkit errors"""


class DimensionError(WitnessError, ValueError):
    """Operands disagree on the number of qubits"""


class ArgumentError(WitnessError, ValueError):
    """An argument is outside its allowed range"""


class ConstructionError(WitnessError):
    """A witness cannot be built from the given operators or settings"""


class LPError(WitnessError):
    """The exact linear program is infeasible or unbounded"""


class DataError(WitnessError):
    """Correlation, counts or witness data is missing or inconsistent"""


class ParseError(DataError):
    """
    A file row could not be parsed

    Args:
        message: What went wrong
        line: 1-based line number in the offending file, if known
    """

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(DataError, ValueError):
    """Data parsed fine but violates a physical or format invariant"""
