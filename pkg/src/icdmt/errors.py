"""Exception types shared by the library and the command line."""


class InvalidParameterError(ValueError):
    """Argument outside the domain of an operation, or structurally wrong input."""


class ValidationError(ValueError):
    """Input that parses but violates a model invariant (power, split consistency)."""


class OutOfRegimeError(ValueError):
    """Formula requested outside the interference regime where it holds."""


class InsufficientDataError(RuntimeError):
    """Not enough usable Monte Carlo points to fit an exponent."""


class ResourceError(RuntimeError):
    """Requested object would exceed a configured size cap."""


class ConsistencyError(RuntimeError):
    """Internal inconsistency between a minimum and one of its terms."""
