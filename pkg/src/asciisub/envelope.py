"""Text and binary serialization of ciphertext plus optional keys.

Text form, two newline-terminated lines::

    ASUB;v=1;mode=paper;keys=in-band:1056,1155
    (1084,1251,1094,...)

``keys=external`` replaces the key list when keys travel out of band.

Binary form, all integers big-endian::

    "ASUB" | version u8 | mode u8 | key count u8 | keys u32* | value count u32 | values u32*

Mode bytes are 1 = paper, 2 = extended; a key count of 0 means external
transport. Both encoders are canonical and both decoders are strict: any
input they accept re-encodes to the identical text or bytes.

In-band transport puts the keys next to the ciphertext. Anyone holding the
envelope can decrypt it.
"""

from __future__ import annotations

import enum
import struct
from collections.abc import Sequence
from dataclasses import dataclass

from asciisub.cipher import CipherText, KeySchedule, decrypt
from asciisub.codec import MODES, get_mode
from asciisub.errors import BadMagic, EnvelopeError, ParseError, TrailingBytes, TruncatedInput

VERSION = 1
MAGIC = b"ASUB"
U32_MAX = 2**32 - 1
MAX_KEYS = 255

MODE_BYTES = {"paper": 1, "extended": 2}
BYTE_MODES = {v: k for k, v in MODE_BYTES.items()}

_HEADER = struct.Struct(">4sBBB")
_U32 = struct.Struct(">I")


class KeyTransport(enum.Enum):
    IN_BAND = "in-band"
    EXTERNAL = "external"


@dataclass(frozen=True)
class Envelope:
    mode_name: str
    key_transport: KeyTransport
    keys: tuple[int, ...] | None
    values: tuple[int, ...]
    version: int = VERSION

    def __post_init__(self) -> None:
        if self.keys is not None:
            object.__setattr__(self, "keys", tuple(self.keys))
        object.__setattr__(self, "values", tuple(self.values))
        if self.version != VERSION:
            raise EnvelopeError(f"unsupported version {self.version}")
        if self.mode_name not in MODES:
            raise EnvelopeError(f"unknown mode {self.mode_name!r}")
        if self.key_transport is KeyTransport.IN_BAND:
            if not self.keys:
                raise EnvelopeError("in-band transport requires keys")
            if len(self.keys) > MAX_KEYS:
                raise EnvelopeError(f"at most {MAX_KEYS} keys fit in an envelope")
            _check_u32(self.keys, "key")
        elif self.keys is not None:
            raise EnvelopeError("external transport must not carry keys")
        _check_u32(self.values, "value")

    @property
    def schedule(self) -> KeySchedule | None:
        return KeySchedule(self.keys) if self.keys is not None else None

    @property
    def ciphertext(self) -> CipherText:
        return CipherText(self.values, self.mode_name)


def _check_u32(values: Sequence[int], what: str) -> None:
    for v in values:
        if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v <= U32_MAX:
            raise EnvelopeError(f"{what} {v!r} is not an unsigned 32-bit integer")


def seal(ciphertext: CipherText, schedule: KeySchedule, transport: KeyTransport = KeyTransport.IN_BAND) -> Envelope:
    keys = schedule.keys if transport is KeyTransport.IN_BAND else None
    return Envelope(ciphertext.mode, transport, keys, ciphertext.values)


def unseal(env: Envelope, schedule: KeySchedule | None = None) -> str:
    """Decrypt an envelope with ``schedule``, falling back to its in-band keys."""
    if schedule is None:
        schedule = env.schedule
    if schedule is None:
        raise EnvelopeError("envelope uses external key transport; keys must be supplied")
    return decrypt(env.ciphertext, schedule, get_mode(env.mode_name))


# text form


def encode_text(env: Envelope) -> str:
    if env.key_transport is KeyTransport.IN_BAND:
        keyspec = "in-band:" + ",".join(map(str, env.keys))
    else:
        keyspec = "external"
    body = ",".join(map(str, env.values))
    return f"ASUB;v={env.version};mode={env.mode_name};keys={keyspec}\n({body})\n"


class _Cursor:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def fail(self, message: str, offset: int | None = None) -> ParseError:
        return ParseError(self.pos if offset is None else offset, message)

    def startswith(self, literal: str) -> bool:
        return self.text.startswith(literal, self.pos)

    def expect(self, literal: str) -> None:
        if not self.startswith(literal):
            got = self.text[self.pos : self.pos + len(literal)]
            raise self.fail(f"expected {literal!r}, got {got!r}")
        self.pos += len(literal)

    def number(self) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] in "0123456789":
            self.pos += 1
        digits = self.text[start : self.pos]
        if not digits:
            raise self.fail("expected a decimal number")
        if len(digits) > 1 and digits[0] == "0":
            raise self.fail("leading zeros are not canonical", start)
        value = int(digits)
        if value > U32_MAX:
            raise self.fail("number exceeds 32 bits", start)
        return value

    def numbers(self) -> list[int]:
        out = [self.number()]
        while self.startswith(","):
            self.pos += 1
            out.append(self.number())
        return out

    def word(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] in "abcdefghijklmnopqrstuvwxyz":
            self.pos += 1
        if start == self.pos:
            raise self.fail("expected a lowercase name")
        return self.text[start : self.pos]


def decode_text(text: str | bytes) -> Envelope:
    """Parse the canonical text form; ParseError offsets count bytes."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("ascii")
        except UnicodeDecodeError as exc:
            raise ParseError(exc.start, "non-ASCII byte") from None
    cur = _Cursor(text)
    cur.expect("ASUB;v=")
    start = cur.pos
    version = cur.number()
    if version != VERSION:
        raise cur.fail(f"unsupported version {version}", start)
    cur.expect(";mode=")
    start = cur.pos
    mode = cur.word()
    if mode not in MODES:
        raise cur.fail(f"unknown mode {mode!r}", start)
    cur.expect(";keys=")
    if cur.startswith("external"):
        cur.pos += len("external")
        transport, keys = KeyTransport.EXTERNAL, None
    else:
        cur.expect("in-band:")
        start = cur.pos
        keys = cur.numbers()
        if len(keys) > MAX_KEYS:
            raise cur.fail(f"more than {MAX_KEYS} keys", start)
        transport = KeyTransport.IN_BAND
    cur.expect("\n(")
    values = [] if cur.startswith(")") else cur.numbers()
    cur.expect(")\n")
    if cur.pos != len(text):
        raise cur.fail("trailing characters after envelope")
    return Envelope(mode, transport, keys, values, version)


# binary form


def encode_binary(env: Envelope) -> bytes:
    keys = env.keys or ()
    return b"".join(
        [
            _HEADER.pack(MAGIC, env.version, MODE_BYTES[env.mode_name], len(keys)),
            struct.pack(f">{len(keys)}I", *keys),
            _U32.pack(len(env.values)),
            struct.pack(f">{len(env.values)}I", *env.values),
        ]
    )


def decode_binary(data: bytes) -> Envelope:
    data = bytes(data)
    head = data[: len(MAGIC)]
    if head != MAGIC[: len(head)]:
        raise BadMagic(0, f"expected magic {MAGIC!r}, got {head!r}")
    if len(data) < _HEADER.size:
        raise TruncatedInput(len(data), f"header needs {_HEADER.size} bytes, got {len(data)}")
    _, version, mode_byte, key_count = _HEADER.unpack_from(data)
    if version != VERSION:
        raise ParseError(4, f"unsupported version {version}")
    if mode_byte not in BYTE_MODES:
        raise ParseError(5, f"unknown mode byte {mode_byte}")
    pos = _HEADER.size
    keys_end = pos + 4 * key_count
    if len(data) < keys_end + 4:
        raise TruncatedInput(len(data), f"{key_count} keys and value count need {keys_end + 4} bytes")
    keys = struct.unpack_from(f">{key_count}I", data, pos) if key_count else None
    (count,) = _U32.unpack_from(data, keys_end)
    pos = keys_end + 4
    end = pos + 4 * count
    if len(data) < end:
        raise TruncatedInput(len(data), f"{count} values need {end} bytes, got {len(data)}")
    if len(data) > end:
        raise TrailingBytes(end, f"{len(data) - end} bytes after the last value")
    values = struct.unpack_from(f">{count}I", data, pos)
    transport = KeyTransport.IN_BAND if key_count else KeyTransport.EXTERNAL
    return Envelope(BYTE_MODES[mode_byte], transport, keys, values, version)
