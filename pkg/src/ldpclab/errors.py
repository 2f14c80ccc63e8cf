"""Exception hierarchy shared across the package."""


class LdpcError(Exception):
    """Base class for all package errors."""


class DimensionError(LdpcError, ValueError):
    """Array or matrix sizes do not agree."""


class FormatError(LdpcError, ValueError):
    """Malformed alist or base-matrix text.

    ``line`` is the 1-indexed line the problem was detected on, when known.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ParameterError(LdpcError, ValueError):
    """A construction or analysis parameter is out of its valid range."""


class StructureError(LdpcError, ValueError):
    """A matrix lacks the structure an algorithm requires."""


class DegenerateCodeError(LdpcError, ValueError):
    """The parity-check matrix admits only the all-zero codeword."""


class ConfigError(LdpcError, ValueError):
    """Invalid channel, decoder or simulation configuration."""
