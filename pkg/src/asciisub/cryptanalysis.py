"""Attacks and measurements against the alternating-key cipher.

Because every ciphertext value is ``reversed_code + key`` with plain integer
addition, one known plaintext/ciphertext pair per key position yields the key
outright, and without any plaintext the feasible keys for each position class
are confined to a window no wider than the spread of reversed codes.
"""

from __future__ import annotations

import itertools
import math
import string
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from asciisub.cipher import CipherText, KeySchedule
from asciisub.codec import PAPER, CodecConfig, reverse_table, validate_text
from asciisub.errors import (
    AlphabetViolation,
    CandidateLimitExceeded,
    EmptyCiphertext,
    EmptyText,
    InconsistentPair,
    InvalidFrequencyTable,
    LengthMismatch,
    NegativeResidue,
)

LETTERS = string.ascii_uppercase
DEFAULT_LIMIT = 10**6
DEFAULT_TABLE = "english_v1.txt"


@dataclass(frozen=True)
class FrequencyTable:
    """Relative letter frequencies for A-Z, normalized to sum to 1."""

    freqs: tuple[float, ...]
    name: str = "custom"

    def __post_init__(self) -> None:
        freqs = tuple(float(f) for f in self.freqs)
        object.__setattr__(self, "freqs", freqs)
        if len(freqs) != 26:
            raise InvalidFrequencyTable(f"expected 26 frequencies, got {len(freqs)}")
        if any(f < 0 or math.isnan(f) for f in freqs):
            raise InvalidFrequencyTable("frequencies must be non-negative")
        if abs(sum(freqs) - 1.0) > 1e-9:
            raise InvalidFrequencyTable(f"frequencies sum to {sum(freqs)!r}, not 1")

    def __getitem__(self, letter: str) -> float:
        return self.freqs[LETTERS.index(letter)]

    @classmethod
    def from_mapping(cls, mapping: dict[str, float], name: str = "custom", normalize: bool = False) -> FrequencyTable:
        if sorted(mapping) != list(LETTERS):
            raise InvalidFrequencyTable("table must cover exactly the letters A-Z")
        raw = [float(mapping[c]) for c in LETTERS]
        if normalize:
            total = sum(raw)
            if not total > 0:
                raise InvalidFrequencyTable("frequencies sum to zero")
            raw = [f / total for f in raw]
        return cls(tuple(raw), name)


def parse_frequency_table(text: str, name: str = "custom", normalize: bool = True) -> FrequencyTable:
    """Parse the ``LETTER frequency`` line format (26 lines).

    Published tables are rounded and rarely sum to exactly 1; ``normalize``
    rescales them, after checking the raw sum is within 1e-3 of 1.
    """
    lines = text.splitlines()
    if len(lines) != 26:
        raise InvalidFrequencyTable(f"expected 26 lines, got {len(lines)}")
    mapping: dict[str, float] = {}
    for lineno, line in enumerate(lines, 1):
        parts = line.split(" ")
        if len(parts) != 2 or len(parts[0]) != 1 or parts[0] not in LETTERS:
            raise InvalidFrequencyTable(f"line {lineno}: expected 'LETTER frequency', got {line!r}")
        if parts[0] in mapping:
            raise InvalidFrequencyTable(f"line {lineno}: duplicate letter {parts[0]}")
        try:
            mapping[parts[0]] = float(parts[1])
        except ValueError:
            raise InvalidFrequencyTable(f"line {lineno}: bad frequency {parts[1]!r}") from None
    if normalize and abs(sum(mapping.values()) - 1.0) > 1e-3:
        raise InvalidFrequencyTable(f"raw frequencies sum to {sum(mapping.values())}, too far from 1")
    return FrequencyTable.from_mapping(mapping, name, normalize=normalize)


def load_frequency_table(path: str | Path | None = None) -> FrequencyTable:
    """Load a table from ``path``, or the bundled English table."""
    if path is None:
        text = resources.files("asciisub.data").joinpath(DEFAULT_TABLE).read_text(encoding="ascii")
        return parse_frequency_table(text, name="english_v1")
    path = Path(path)
    return parse_frequency_table(path.read_text(encoding="ascii"), name=path.stem)


def _chi_squared(counts: Sequence[int], total: int, freq: FrequencyTable) -> float:
    score = 0.0
    for observed, f in zip(counts, freq.freqs):
        expected = f * total
        if expected == 0:
            if observed:
                return math.inf
            continue
        score += (observed - expected) ** 2 / expected
    return score


def chi_squared_score(text: str, freq: FrequencyTable) -> float:
    """Pearson chi-squared of the letter counts of ``text`` against ``freq``."""
    if not text:
        raise EmptyText("cannot score empty text")
    counts = [0] * 26
    for i, ch in enumerate(text):
        idx = LETTERS.find(ch)
        if idx < 0:
            raise AlphabetViolation(i, ch, f"chi-squared scoring takes A-Z only, got {ch!r} at {i}")
        counts[idx] += 1
    return _chi_squared(counts, len(text), freq)


def _values(ciphertext: CipherText | Iterable[int]) -> tuple[int, ...]:
    return ciphertext.values if isinstance(ciphertext, CipherText) else tuple(ciphertext)


@dataclass(frozen=True)
class PartialSchedule:
    """Recovered keys; None marks a position class with no observations."""

    keys: tuple[int | None, ...]

    @property
    def complete(self) -> bool:
        return all(k is not None for k in self.keys)

    def to_schedule(self) -> KeySchedule:
        if not self.complete:
            missing = [i + 1 for i, k in enumerate(self.keys) if k is None]
            raise ValueError(f"keys {missing} are undetermined")
        return KeySchedule(tuple(self.keys))  # type: ignore[arg-type]


def known_plaintext_attack(
    plaintext: str,
    ciphertext: CipherText | Iterable[int],
    config: CodecConfig = PAPER,
    n_keys: int = 2,
) -> PartialSchedule:
    values = _values(ciphertext)
    if len(values) != len(plaintext):
        raise LengthMismatch(f"plaintext has {len(plaintext)} characters, ciphertext {len(values)} values")
    if n_keys < 1:
        raise ValueError("n_keys must be at least 1")
    validate_text(plaintext, config)
    rev = reverse_table(config)
    keys: list[int | None] = [None] * n_keys
    first_seen = [0] * n_keys
    for i, (ch, v) in enumerate(zip(plaintext, values)):
        k = v - rev[ch]
        if k < 0:
            raise NegativeResidue(f"value {v} at position {i} is below the reversed code of {ch!r}")
        cls = i % n_keys
        if keys[cls] is None:
            keys[cls] = k
            first_seen[cls] = i
        elif keys[cls] != k:
            raise InconsistentPair(
                f"positions {first_seen[cls]} and {i} imply key {cls + 1} = {keys[cls]} and {k}"
            )
    return PartialSchedule(tuple(keys))


@dataclass(frozen=True)
class Candidate:
    keys: tuple[int | None, ...]
    plaintext: str
    score: float

    @property
    def schedule(self) -> KeySchedule:
        return PartialSchedule(self.keys).to_schedule()


@dataclass
class AttackReport:
    candidates: list[Candidate]
    search_space_size: int
    notes: list[str] = field(default_factory=list)

    def rank_of(self, plaintext: str) -> int | None:
        """1-based rank of the first candidate decoding to ``plaintext``."""
        for rank, c in enumerate(self.candidates, 1):
            if c.plaintext == plaintext:
                return rank
        return None

    def rank_of_keys(self, keys: Sequence[int | None]) -> int | None:
        keys = tuple(keys)
        for rank, c in enumerate(self.candidates, 1):
            if c.keys == keys:
                return rank
        return None


@dataclass
class _ClassOption:
    key: int | None
    chars: list[str]
    counts: list[int]


def _class_options(values: Sequence[int], rev_to_char: dict[int, str]) -> tuple[list[_ClassOption], int]:
    if not values:
        return [_ClassOption(None, [], [0] * 26)], 1
    min_rev, max_rev = min(rev_to_char), max(rev_to_char)
    lo = max(0, max(values) - max_rev)
    hi = min(values) - min_rev
    window = max(0, hi - lo + 1)
    options = []
    for k in range(lo, hi + 1):
        chars = []
        for v in values:
            ch = rev_to_char.get(v - k)
            if ch is None:
                break
            chars.append(ch)
        else:
            counts = [0] * 26
            for ch in chars:
                idx = LETTERS.find(ch.upper())
                if idx >= 0:
                    counts[idx] += 1
            options.append(_ClassOption(k, chars, counts))
    return options, window


def ciphertext_only_attack(
    ciphertext: CipherText | Iterable[int],
    config: CodecConfig = PAPER,
    freq: FrequencyTable | None = None,
    *,
    n_keys: int = 2,
    alphabet: str = LETTERS,
    limit: int = DEFAULT_LIMIT,
) -> AttackReport:
    """Enumerate every key schedule that decodes ``ciphertext`` into ``alphabet``.

    For each position class the candidate keys are those in
    ``[max(values) - max_rev, min(values) - min_rev]`` whose residues are all
    reversed codes of alphabet characters. The cross product of the per-class
    survivors is decoded and ranked by chi-squared (letters only, case folded),
    ties broken by key tuple. The true schedule is always among the candidates
    when the plaintext was drawn from ``alphabet``.
    """
    values = _values(ciphertext)
    if not values:
        raise EmptyCiphertext("ciphertext-only attack needs at least one value")
    if n_keys < 1:
        raise ValueError("n_keys must be at least 1")
    if not alphabet:
        raise ValueError("alphabet must be non-empty")
    validate_text(alphabet, config)
    if freq is None:
        freq = load_frequency_table()

    rev = reverse_table(config)
    rev_to_char = {rev[ch]: ch for ch in set(alphabet)}
    per_class = []
    search_space = 1
    for cls in range(n_keys):
        options, window = _class_options(values[cls::n_keys], rev_to_char)
        per_class.append(options)
        search_space *= window

    n_candidates = math.prod(len(opts) for opts in per_class)
    if n_candidates > limit:
        raise CandidateLimitExceeded(f"{n_candidates} candidate schedules exceed the limit of {limit}")

    candidates = []
    buf = [""] * len(values)
    for combo in itertools.product(*per_class):
        counts = [sum(col) for col in zip(*(opt.counts for opt in combo))]
        total = sum(counts)
        score = _chi_squared(counts, total, freq) if total else math.inf
        for cls, opt in enumerate(combo):
            buf[cls::n_keys] = opt.chars
        candidates.append(Candidate(tuple(opt.key for opt in combo), "".join(buf), score))
    candidates.sort(key=lambda c: (c.score, tuple(-1 if k is None else k for k in c.keys)))

    notes = [
        f"{n_keys} key classes, alphabet of {len(set(alphabet))} symbols",
        f"raw key windows span {search_space} schedules; {n_candidates} decode into the alphabet",
    ]
    undetermined = [i + 1 for i, opts in enumerate(per_class) if opts[0].key is None]
    if undetermined:
        notes.append(f"keys {undetermined} have no ciphertext positions and are undetermined")
    return AttackReport(candidates, search_space, notes)


@dataclass
class DiffusionReport:
    """Ciphertext values observed for each plaintext symbol."""

    mapping: dict[str, Counter]
    max_distinct: int

    def distinct(self, symbol: str) -> set[int]:
        return set(self.mapping.get(symbol, ()))


def diffusion_report(plaintext: str, ciphertext: CipherText | Iterable[int]) -> DiffusionReport:
    values = _values(ciphertext)
    if len(values) != len(plaintext):
        raise LengthMismatch(f"plaintext has {len(plaintext)} characters, ciphertext {len(values)} values")
    mapping: dict[str, Counter] = {}
    for ch, v in zip(plaintext, values):
        mapping.setdefault(ch, Counter())[v] += 1
    max_distinct = max((len(c) for c in mapping.values()), default=0)
    return DiffusionReport(mapping, max_distinct)
