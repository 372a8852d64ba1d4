"""Exception hierarchy for the library.

Every error raised on bad input derives from :class:`LogDecompError`; the CLI
maps the subclasses onto exit codes.
"""


class LogDecompError(Exception):
    """Base class for all library errors."""


class SpaceError(LogDecompError, ValueError):
    """Invalid outcome space construction."""


class DuplicateLabelError(SpaceError):
    pass


class NegativeWeightError(SpaceError):
    pass


class LengthMismatchError(SpaceError):
    pass


class CapExceededError(LogDecompError):
    """A computation would exceed a configured size cap."""


class SpaceTooLargeError(SpaceError, CapExceededError):
    pass


class PartitionError(LogDecompError, ValueError):
    """Blocks do not form a partition of the outcome set."""


class OverlapError(PartitionError):
    pass


class MissingOutcomeError(PartitionError):
    pass


class UnknownLabelError(PartitionError, KeyError):
    def __str__(self):
        # KeyError quotes its argument; keep the plain message
        return Exception.__str__(self)


class SpaceMismatchError(LogDecompError, ValueError):
    """Operands live on different outcome spaces."""


class ArityError(LogDecompError, ValueError):
    pass


class UnknownVariableError(LogDecompError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class ExpressionError(LogDecompError, ValueError):
    """Malformed set or entropy expression."""


class RefinementError(LogDecompError, ValueError):
    pass
