"""Exception types shared across the package."""


class SpaError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(SpaError, ValueError):
    """A model or run parameter is outside its admissible domain."""


class UsageError(SpaError, ValueError):
    """An operation was called in a way its contract forbids."""


class ParseError(SpaError, ValueError):
    """A file could not be parsed; carries the byte offset of the bad data."""

    def __init__(self, message, byte_offset):
        super().__init__(f"{message} (byte offset {byte_offset})")
        self.byte_offset = byte_offset


class VerificationError(SpaError):
    """An equivalence check between two computation routes failed."""
