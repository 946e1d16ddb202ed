"""Exception hierarchy shared by all modules."""


class ExpFramesError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatchError(ExpFramesError, ValueError):
    pass


class EmptyRegionError(ExpFramesError, ValueError):
    pass


class LevelExceededError(ExpFramesError, ValueError):
    """Requested multiplicity is below the subtiling level of the region."""


class NotExactMultitileError(ExpFramesError, ValueError):
    pass


class NonHermitianError(ExpFramesError, ValueError):
    pass


class SizeExceededError(ExpFramesError, ValueError):
    pass


class PreconditionViolationError(ExpFramesError, ValueError):
    pass


class ExhaustedAttemptsError(ExpFramesError, RuntimeError):
    """No admissible shifts were found within the attempt budget.

    ``best`` holds the best candidate ``(shifts, report)`` seen, or None.
    """

    def __init__(self, message, best=None, attempts=0):
        super().__init__(message)
        self.best = best
        self.attempts = attempts


class SceneParseError(ExpFramesError, ValueError):
    """Scene file syntax or validation failure, positioned by line and field."""

    def __init__(self, message, line=None, field=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.line = line
        self.field = field
