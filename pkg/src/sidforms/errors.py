"""Exception hierarchy shared by all sidforms modules."""


class SidformsError(Exception):
    """Base class for all library errors."""


class NotPrime(SidformsError):
    pass


class FieldTooLarge(SidformsError):
    pass


class DimensionMismatch(SidformsError):
    pass


class EmptySystem(SidformsError):
    pass


class RankDeficient(SidformsError):
    pass


class BadIndex(SidformsError):
    pass


class TooManyCombinations(SidformsError):
    pass


class TooManyColumns(SidformsError):
    pass


class ZeroForm(SidformsError):
    pass


class BadArity(SidformsError):
    pass


class DegenerateSystem(SidformsError):
    pass


class BudgetExceeded(SidformsError):
    pass


class SearchBudgetExceeded(SidformsError):
    pass


class HypothesisViolated(SidformsError):
    pass


class TooLarge(SidformsError):
    pass


class RetriesExhausted(SidformsError):
    pass


class ConsistencyError(SidformsError):
    """An identity that must hold exactly failed; indicates a bug."""


class ParseError(SidformsError):
    """Malformed input file; carries the 1-based offending line number."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line
