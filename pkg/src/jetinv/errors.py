"""Exception types shared across the package."""


class JetinvError(Exception):
    """Base class for all errors raised by jetinv."""


class UnsupportedError(JetinvError):
    """A family, size or parameter range that is not implemented."""


class NotInvariantError(JetinvError):
    """An input that was required to be invariant is not.

    ``constraint`` names the violated (generator, power of t) pair when known.
    """

    def __init__(self, message, constraint=None):
        super().__init__(message)
        self.constraint = constraint


class InternalError(JetinvError):
    """A consistency check inside an algorithm failed; indicates a bug."""
