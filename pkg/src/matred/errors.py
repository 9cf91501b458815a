"""Exception types raised across the package."""


class MatredError(Exception):
    """Base class for all package errors."""


class InvalidArgument(MatredError, ValueError):
    """An argument is outside the documented domain."""


class RejectedInput(InvalidArgument):
    """Input data fails a structural requirement (e.g. positive definiteness)."""


class ResourceLimitError(MatredError):
    """A computation would exceed a configured size cap."""


class IllConditionedError(MatredError):
    """A linear system is too ill-conditioned to be trusted."""


class InconsistentResultError(MatredError):
    """A post-hoc consistency check on a computed result failed."""


class SpecError(MatredError):
    """A weight-spec document is malformed."""
