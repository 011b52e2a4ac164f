"""Exception types raised by the library."""


class ZeroSumError(Exception):
    """Base class for library errors."""


class RemoveAbsent(ZeroSumError, KeyError):
    pass


class ZeroElementInSequence(ZeroSumError, ValueError):
    pass


class NotCyclic(ZeroSumError, ValueError):
    pass


class TrivialGroup(ZeroSumError, ValueError):
    pass


class EvenOrSmallN(ZeroSumError, ValueError):
    pass


class RankTooSmall(ZeroSumError, ValueError):
    pass


class SeedNotZeroSumFree(ZeroSumError, ValueError):
    pass


class NotZeroSumFree(ZeroSumError, ValueError):
    pass


class CandidateNotAllowed(ZeroSumError, ValueError):
    pass


class BudgetExhausted(ZeroSumError):
    """A search ran out of its time or node budget.

    ``partial`` carries whatever the search had established so far.
    """

    def __init__(self, message: str, partial=None) -> None:
        super().__init__(message)
        self.partial = partial
