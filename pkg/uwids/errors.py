# 2026/09/02
"""
errors.py - Exceptions raised by uwids.

Every error derives from UwidsError. Errors caused by bad input data or
configuration also derive from ValueError, so they can be caught as such.

"""


class UwidsError(Exception):
    """Base class for uwids errors."""


class ConfigurationError(UwidsError, ValueError):
    """Invalid configuration value or combination of values."""


class DegenerateVectorError(UwidsError, ValueError):
    """Routing vector of zero length (source equals sink)."""


class TraceParseError(UwidsError, ValueError):
    """A trace row could not be parsed."""

    def __init__(self, message: str, row_index: int | None = None) -> None:
        self.row_index = row_index
        if row_index is not None:
            message = f"row {row_index}: {message}"
        super().__init__(message)


class IntegrityError(UwidsError, ValueError):
    """Dataset content violates its schema (e.g. label out of range)."""


class TrainingError(UwidsError, ValueError):
    """A model cannot be trained on the given data."""


class DimensionError(UwidsError, ValueError):
    """Vectors of different dimensionality were combined."""


class InputRangeError(UwidsError, ValueError):
    """A streaming detector received a value outside its domain."""


class ModelError(UwidsError, ValueError):
    """A model was used with data it cannot represent."""


class PersistenceError(UwidsError, ValueError):
    """A persisted artifact has an unknown format or version."""


class MetricsError(UwidsError, ValueError):
    """Metrics cannot be computed on the given inputs."""


# Intrusion prevention protocol


class ProtocolError(UwidsError, ValueError):
    """Base class for key reset protocol failures."""


class FreshnessError(ProtocolError):
    """A message timestamp lies outside the freshness window."""


class AuthenticityError(ProtocolError):
    """A signature or decryption check failed."""


class BindingError(ProtocolError):
    """The binding digest does not match the received ciphertext."""


class RssiRejected(ProtocolError):
    """Measured signal strength is outside the registered range."""


class DuplicateExchangeError(ProtocolError):
    """An exchange for the node is already pending."""


class NoPendingExchangeError(ProtocolError):
    """A response arrived for which no exchange is pending."""
