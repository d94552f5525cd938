"""Fixed-width decimal digit reversal of character codes.

A code is written as a zero-padded decimal string of ``width`` digits and
read back right-to-left. Padding is what makes the operation an involution:
at width 2, 80 -> "80" -> "08" -> 8, and 8 -> "08" -> "80" -> 80.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from asciisub.errors import AlphabetViolation, CodeOutOfRange, DecodedCodeOutOfRange


@dataclass(frozen=True)
class CodecConfig:
    width: int
    min_code: int
    max_code: int
    mode_name: str

    def __post_init__(self) -> None:
        if self.width not in (2, 3):
            raise ValueError(f"width must be 2 or 3, got {self.width}")
        if not 0 <= self.min_code <= self.max_code < 10**self.width:
            raise ValueError(
                f"code bounds [{self.min_code}, {self.max_code}] do not fit in {self.width} digits"
            )

    @property
    def modulus(self) -> int:
        """One past the largest reversed value, ``10 ** width``."""
        return 10**self.width

    def codes(self) -> range:
        return range(self.min_code, self.max_code + 1)


PAPER = CodecConfig(width=2, min_code=10, max_code=99, mode_name="paper")
EXTENDED = CodecConfig(width=3, min_code=0, max_code=255, mode_name="extended")

MODES = {PAPER.mode_name: PAPER, EXTENDED.mode_name: EXTENDED}


def get_mode(name: str) -> CodecConfig:
    try:
        return MODES[name]
    except KeyError:
        raise ValueError(f"unknown mode {name!r}; expected one of {sorted(MODES)}") from None


@dataclass(frozen=True)
class ReversedCode:
    value: int
    width: int

    def __post_init__(self) -> None:
        if not 0 <= self.value < 10**self.width:
            raise ValueError(f"reversed value {self.value} does not fit in {self.width} digits")

    @property
    def digits(self) -> str:
        """The zero-padded digit string, e.g. ``"08"``."""
        return f"{self.value:0{self.width}d}"

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return self.digits


def _flip(value: int, width: int) -> int:
    return int(f"{value:0{width}d}"[::-1])


def reverse_code(code: int, config: CodecConfig) -> ReversedCode:
    if not config.min_code <= code <= config.max_code:
        raise CodeOutOfRange(
            f"code {code} outside [{config.min_code}, {config.max_code}] ({config.mode_name} mode)"
        )
    return ReversedCode(_flip(code, config.width), config.width)


def unreverse_code(rc: ReversedCode | int, config: CodecConfig) -> int:
    """Invert :func:`reverse_code`.

    Accepts a bare integer as well; a :class:`ReversedCode` must carry the
    config's width. Raises :class:`DecodedCodeOutOfRange` when the result is
    not a code of the alphabet.
    """
    if isinstance(rc, ReversedCode):
        if rc.width != config.width:
            raise ValueError(f"reversed code has width {rc.width}, config expects {config.width}")
        value = rc.value
    else:
        value = rc
    if not 0 <= value < config.modulus:
        raise DecodedCodeOutOfRange(f"residue {value} does not fit in {config.width} digits")
    code = _flip(value, config.width)
    if not config.min_code <= code <= config.max_code:
        raise DecodedCodeOutOfRange(
            f"residue {value} un-reverses to {code}, outside [{config.min_code}, {config.max_code}]"
        )
    return code


def validate_text(text: str, config: CodecConfig) -> None:
    for i, ch in enumerate(text):
        if not config.min_code <= ord(ch) <= config.max_code:
            raise AlphabetViolation(i, ch)


@lru_cache(maxsize=None)
def reverse_table(config: CodecConfig) -> dict[str, int]:
    """Map each alphabet character to its reversed code."""
    return {chr(c): _flip(c, config.width) for c in config.codes()}


@lru_cache(maxsize=None)
def unreverse_table(config: CodecConfig) -> tuple[str | None, ...]:
    """Index a residue to its decoded character, or None when it leaves the alphabet."""
    table: list[str | None] = [None] * config.modulus
    for ch, rev in reverse_table(config).items():
        table[rev] = ch
    return tuple(table)
