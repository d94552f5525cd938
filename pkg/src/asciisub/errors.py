"""Exception hierarchy.

Every error raised on bad data derives from :class:`AsubError`, so callers
(the CLI in particular) can separate data errors from programming errors.
"""

from __future__ import annotations


class AsubError(Exception):
    """Base class for all data errors raised by this package."""


# codec


class CodeOutOfRange(AsubError, ValueError):
    """A character code lies outside the configured alphabet."""


class DecodedCodeOutOfRange(AsubError, ValueError):
    """A residue un-reverses to a code outside the alphabet (wrong key or corrupt data)."""


class AlphabetViolation(AsubError, ValueError):
    def __init__(self, position: int, char: str, message: str | None = None):
        self.position = position
        self.char = char
        super().__init__(message or f"character {char!r} at position {position} is outside the alphabet")


# cipher


class InvalidKeySchedule(AsubError, ValueError):
    pass


class NegativeResidue(AsubError, ValueError):
    """A ciphertext value is smaller than the key applied to it."""


class ModeMismatch(AsubError, ValueError):
    pass


# cryptanalysis


class LengthMismatch(AsubError, ValueError):
    pass


class InconsistentPair(AsubError, ValueError):
    """Two positions sharing a key imply different key values."""


class EmptyCiphertext(AsubError, ValueError):
    pass


class EmptyText(AsubError, ValueError):
    pass


class CandidateLimitExceeded(AsubError, ValueError):
    pass


class InvalidFrequencyTable(AsubError, ValueError):
    pass


# envelope


class EnvelopeError(AsubError, ValueError):
    """An envelope violates its structural invariants."""


class ParseError(AsubError, ValueError):
    def __init__(self, offset: int, message: str):
        self.offset = offset
        super().__init__(f"offset {offset}: {message}")


class BadMagic(ParseError):
    pass


class TruncatedInput(ParseError):
    pass


class TrailingBytes(ParseError):
    pass


# netdemo


class ProtocolError(AsubError):
    pass


class FrameTooLarge(ProtocolError):
    pass


class RemoteError(ProtocolError):
    """The peer answered with an error reply."""


class ConnectionFailed(AsubError, ConnectionError):
    pass


class Timeout(AsubError, TimeoutError):
    pass
