class ReadopError(Exception):
    """Base class for all library errors."""


class HorizonExceeded(ReadopError):
    """A rank or coordinate depends on parameters that are not fixed yet."""

    def __init__(self, message: str, limit: int | None = None):
        super().__init__(message)
        self.limit = limit


class RankOutsideAlphaDomain(ReadopError):
    pass


class ConstantTermPresent(ReadopError):
    pass


class BudgetExhausted(ReadopError):
    pass


class SearchBudgetExhausted(BudgetExhausted):
    def __init__(self, message: str, condition: str | None = None):
        super().__init__(message)
        self.condition = condition


class NotInHead(ReadopError):
    pass


class NotInTail(ReadopError):
    pass


class NotQualifying(ReadopError):
    pass


class ResidualTooLarge(ReadopError):
    pass


class SampleFailure(ReadopError):
    pass


class ZeroVector(ReadopError):
    pass


class Unresolved(ReadopError):
    """No constructed stage is deep enough to settle the request."""


class BoundViolated(ReadopError):
    pass


class FormatError(ReadopError, ValueError):
    pass
