import typing as t


class TropRecError(ValueError):
    """Base class of every error raised by troprec.

    Each subclass carries a stable ``code`` (used in JSON output and tests) and the
    process ``exit_code`` the command line uses when the error escapes a command.
    """
    code = "TropRecError"
    exit_code = 1

    def __init__(self, message: str = "", **details) -> None:
        super().__init__(message or self.code)
        self.details: t.Dict[str, t.Any] = details

    def to_dict(self) -> t.Dict[str, t.Any]:
        return {"error": self.code, "message": str(self), **self.details}


class ParseError(TropRecError):
    code = "ParseError"
    exit_code = 2


class TooFewEntries(ParseError):
    code = "TooFewEntries"


class FirstEntryInfinite(ParseError):
    code = "FirstEntryInfinite"


class LastEntryInfinite(ParseError):
    code = "LastEntryInfinite"


class MalformedToken(ParseError):
    code = "MalformedToken"


class MalformedPeriod(ParseError):
    code = "MalformedPeriod"


# core
class EdgeIndexOutOfRange(TropRecError):
    code = "EdgeIndexOutOfRange"


# recurrence
class WindowOutOfRange(TropRecError):
    code = "WindowOutOfRange"


class WordTooShort(TropRecError):
    code = "WordTooShort"


class NotSatisfying(TropRecError):
    code = "NotSatisfying"


class InvalidPeriod(TropRecError):
    code = "InvalidPeriod"


class InvalidGrid(TropRecError):
    code = "InvalidGrid"


class LengthMismatch(TropRecError):
    code = "LengthMismatch"


class ProgressionSupport(TropRecError):
    code = "ProgressionSupport"


class ShiftsTooClose(TropRecError):
    code = "ShiftsTooClose"


class OddEntriesEqual(TropRecError):
    code = "OddEntriesEqual"


class QOutOfRange(TropRecError):
    code = "QOutOfRange"


class ParameterOutOfRange(TropRecError):
    code = "ParameterOutOfRange"


class InapplicableShape(TropRecError):
    code = "InapplicableShape"


class EdgeTooShort(TropRecError):
    code = "EdgeTooShort"


# detector
class InfiniteCoefficient(TropRecError):
    code = "InfiniteCoefficient"


class NonIntegerCoefficient(TropRecError):
    code = "NonIntegerCoefficient"


class EndpointsNotZero(TropRecError):
    code = "EndpointsNotZero"


class NotAxisNormalized(TropRecError):
    code = "NotAxisNormalized"


class AmbiguousEdge(TropRecError):
    code = "AmbiguousEdge"


class StateLimitExceeded(TropRecError):
    code = "StateLimitExceeded"
    exit_code = 4

    def __init__(self, count: int, limit: int, **stats) -> None:
        super().__init__(f"Window enumeration stopped after {count} windows (limit {limit}).",
                         count=count, limit=limit, **stats)
        self.count = count
        self.limit = limit


class EmptyGraphAfterPruning(TropRecError):
    code = "EmptyGraphAfterPruning"


class NotAllPeriodic(TropRecError):
    code = "NotAllPeriodic"


class DotExportError(TropRecError):
    code = "IoError"


# entropy
class MalformedPattern(TropRecError):
    code = "MalformedPattern"


class STooSmall(TropRecError):
    code = "STooSmall"


class EmptyComplex(TropRecError):
    code = "EmptyComplex"


class RegularVector(TropRecError):
    code = "RegularVector"


class FamilyVerificationFailed(TropRecError):
    code = "FamilyVerificationFailed"


class InconsistentTable(TropRecError):
    code = "InconsistentTable"


# oracle
class BudgetExceeded(TropRecError):
    code = "BudgetExceeded"


class SamplingExhausted(TropRecError):
    code = "SamplingExhausted"
