"""Exception hierarchy shared by every module."""


class GlocalError(Exception):
    """Base class for all library errors."""


class InputError(GlocalError, ValueError):
    """Bad argument: wrong shape, non-finite entry, out-of-range parameter."""


class UnsupportedError(GlocalError):
    """The objective lacks a capability the caller asked for."""


class ParseError(InputError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PreconditionError(InputError):
    """A documented precondition (e.g. descent direction) does not hold."""


class SearchFailure(GlocalError):
    """A step-size search ran out of trials without meeting its condition."""


class UnboundedDirectionError(GlocalError):
    """Line optimization could not bracket a minimizer along the ray."""


class StationaryPoint(GlocalError):
    """The gradient vanished, so the step rule is undefined."""


class InconsistentOptimum(InputError):
    """The supplied optimal value exceeds an observed function value."""
