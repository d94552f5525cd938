"""Alternating-key encryption over reversed character codes.

Each character is replaced by its reversed code plus a key; keys are applied
cyclically by position, so with two keys K1 lands on even indices and K2 on
odd ones. Auto-derived keys are the sum of the reversed codes (K1) and the
sum of the plain codes (K2) of the message itself.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from asciisub.codec import PAPER, CodecConfig, reverse_table, unreverse_table, validate_text
from asciisub.errors import DecodedCodeOutOfRange, InvalidKeySchedule, ModeMismatch, NegativeResidue


class Derivation(enum.Enum):
    AUTO_FROM_PLAINTEXT = "auto_from_plaintext"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class KeySchedule:
    keys: tuple[int, ...]
    derivation: Derivation = Derivation.EXPLICIT

    def __post_init__(self) -> None:
        keys = tuple(self.keys)
        object.__setattr__(self, "keys", keys)
        if not keys:
            raise InvalidKeySchedule("a key schedule needs at least one key")
        for k in keys:
            if isinstance(k, bool) or not isinstance(k, int) or k < 0:
                raise InvalidKeySchedule(f"keys must be non-negative integers, got {k!r}")

    @classmethod
    def of(cls, *keys: int) -> KeySchedule:
        return cls(tuple(keys))

    def __len__(self) -> int:
        return len(self.keys)

    def key_at(self, position: int) -> int:
        return self.keys[position % len(self.keys)]


@dataclass(frozen=True)
class CipherText:
    values: tuple[int, ...]
    mode: str = PAPER.mode_name

    def __post_init__(self) -> None:
        values = tuple(self.values)
        object.__setattr__(self, "values", values)
        if any(v < 0 for v in values):
            raise ValueError("ciphertext values must be non-negative")

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)


def derive_keys(plaintext: str, config: CodecConfig = PAPER) -> KeySchedule:
    validate_text(plaintext, config)
    rev = reverse_table(config)
    k1 = sum(rev[ch] for ch in plaintext)
    k2 = sum(ord(ch) for ch in plaintext)
    return KeySchedule((k1, k2), Derivation.AUTO_FROM_PLAINTEXT)


def encrypt(plaintext: str, schedule: KeySchedule | None = None, config: CodecConfig = PAPER) -> CipherText:
    """Encrypt ``plaintext``; ``schedule=None`` derives the two keys from the text."""
    validate_text(plaintext, config)
    if schedule is None:
        schedule = derive_keys(plaintext, config)
    rev = reverse_table(config)
    keys = schedule.keys
    n = len(keys)
    return CipherText(tuple(rev[ch] + keys[i % n] for i, ch in enumerate(plaintext)), config.mode_name)


def decrypt(
    ciphertext: CipherText | Iterable[int], schedule: KeySchedule, config: CodecConfig = PAPER
) -> str:
    if isinstance(ciphertext, CipherText):
        if ciphertext.mode != config.mode_name:
            raise ModeMismatch(f"ciphertext is {ciphertext.mode!r}, config is {config.mode_name!r}")
        values: Sequence[int] = ciphertext.values
    else:
        values = tuple(ciphertext)
    table = unreverse_table(config)
    keys = schedule.keys
    n = len(keys)
    out = []
    for i, v in enumerate(values):
        residue = v - keys[i % n]
        if residue < 0:
            raise NegativeResidue(f"value {v} at position {i} is below its key {keys[i % n]}")
        ch = table[residue] if residue < config.modulus else None
        if ch is None:
            raise DecodedCodeOutOfRange(f"residue {residue} at position {i} is not a reversed code of the alphabet")
        out.append(ch)
    return "".join(out)
