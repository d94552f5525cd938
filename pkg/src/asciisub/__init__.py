"""Polyalphabetic substitution over reversed decimal character codes."""

from asciisub.cipher import CipherText, Derivation, KeySchedule, decrypt, derive_keys, encrypt
from asciisub.codec import EXTENDED, PAPER, CodecConfig, ReversedCode, get_mode, reverse_code, unreverse_code, validate_text
from asciisub.errors import AsubError

__all__ = [
    "AsubError",
    "CipherText",
    "CodecConfig",
    "Derivation",
    "EXTENDED",
    "KeySchedule",
    "PAPER",
    "ReversedCode",
    "decrypt",
    "derive_keys",
    "encrypt",
    "get_mode",
    "reverse_code",
    "unreverse_code",
    "validate_text",
]

__version__ = "0.1.0"
