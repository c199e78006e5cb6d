"""Exception hierarchy shared by all modules."""


class CBCDBDError(Exception):
    """Base class for errors raised by this package."""


class InvalidParameterError(CBCDBDError, ValueError):
    """A parameter is outside its admissible range."""


class DegenerateInputError(CBCDBDError, ValueError):
    """An input violates a precondition of the operation (e.g. a zero polynomial)."""


class ResourceLimitError(CBCDBDError):
    """The requested problem size exceeds a built-in feasibility guard."""


class UnsupportedBaseError(CBCDBDError, NotImplementedError):
    """The operation is only available for base 2."""


class InternalStateError(CBCDBDError, RuntimeError):
    """A construction state was driven out of sequence."""


class ParseError(CBCDBDError, ValueError):
    """Malformed text input (weight specs, vector files)."""

    def __init__(self, message, position=None):
        if position is not None:
            where = f"position {position}" if isinstance(position, int) else position
            message = f"{message} (at {where})"
        super().__init__(message)
        self.position = position
