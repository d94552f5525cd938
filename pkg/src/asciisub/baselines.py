"""Reference shift and keyword ciphers used for comparison.

The monoalphabetic cipher emits uppercase, the keyword cipher lowercase.
Keyword shifts count ``a`` as 1, so key ``abcd`` moves letters by 1, 2, 3, 4.
"""

from __future__ import annotations

import string
from dataclasses import dataclass

from asciisub.errors import AlphabetViolation

LOWER = string.ascii_lowercase
UPPER = string.ascii_uppercase


@dataclass(frozen=True)
class ShiftKey:
    shift: int

    def __post_init__(self) -> None:
        if not 0 <= self.shift <= 25:
            raise ValueError(f"shift must be in [0, 25], got {self.shift}")


@dataclass(frozen=True)
class KeywordKey:
    letters: str

    def __post_init__(self) -> None:
        if not self.letters or any(ch not in LOWER for ch in self.letters):
            raise ValueError(f"keyword must be non-empty lowercase a-z, got {self.letters!r}")

    @property
    def shifts(self) -> list[int]:
        return [LOWER.index(ch) + 1 for ch in self.letters]


def _indices(text: str, alphabet: str) -> list[int]:
    out = []
    for i, ch in enumerate(text):
        idx = alphabet.find(ch)
        if idx < 0:
            raise AlphabetViolation(i, ch)
        out.append(idx)
    return out


def _as_shift(key: ShiftKey | int) -> ShiftKey:
    return key if isinstance(key, ShiftKey) else ShiftKey(key)


def _as_keyword(key: KeywordKey | str) -> KeywordKey:
    return key if isinstance(key, KeywordKey) else KeywordKey(key)


def mono_encrypt(plaintext: str, key: ShiftKey | int) -> str:
    s = _as_shift(key).shift
    return "".join(UPPER[(i + s) % 26] for i in _indices(plaintext, LOWER))


def mono_decrypt(ciphertext: str, key: ShiftKey | int) -> str:
    s = _as_shift(key).shift
    return "".join(LOWER[(i - s) % 26] for i in _indices(ciphertext, UPPER))


def keyword_encrypt(plaintext: str, key: KeywordKey | str) -> str:
    shifts = _as_keyword(key).shifts
    n = len(shifts)
    return "".join(LOWER[(c + shifts[i % n]) % 26] for i, c in enumerate(_indices(plaintext, LOWER)))


def keyword_decrypt(ciphertext: str, key: KeywordKey | str) -> str:
    shifts = _as_keyword(key).shifts
    n = len(shifts)
    return "".join(LOWER[(c - shifts[i % n]) % 26] for i, c in enumerate(_indices(ciphertext, LOWER)))
