"""Exception types shared across the package."""


class FaultlineError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(FaultlineError):
    """Malformed input: bad alphabet, bad rule, bad document, field mismatch."""


class HypothesisError(FaultlineError):
    """A mathematical hypothesis of an operation is violated (e.g. unequal
    image lengths for a boundary trace)."""


class ResourceCapError(FaultlineError):
    """A configured cap (word length, tile count, rounds) would be exceeded."""


class UndeterminedError(FaultlineError):
    """A classification refused to commit at the configured precision."""


class NoPerronRootError(FaultlineError):
    """The matrix has no positive real eigenvalue (zero matrix)."""


class DegenerateEigenspaceError(FaultlineError):
    """The Perron eigenspace is not one-dimensional."""
