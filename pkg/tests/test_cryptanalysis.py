import itertools
import math
import random
import string

import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import chisquare

from asciisub.cipher import KeySchedule, encrypt
from asciisub.codec import EXTENDED, PAPER
from asciisub.cryptanalysis import (
    FrequencyTable,
    PartialSchedule,
    chi_squared_score,
    ciphertext_only_attack,
    diffusion_report,
    known_plaintext_attack,
    load_frequency_table,
    parse_frequency_table,
)
from asciisub.errors import (
    AlphabetViolation,
    CandidateLimitExceeded,
    EmptyCiphertext,
    EmptyText,
    InconsistentPair,
    InvalidFrequencyTable,
    LengthMismatch,
)
from oracles import rev_digits

GOLDEN_TEXT = "RESPECTEVERYONE"
GOLDEN_CT = (1084, 1251, 1094, 1163, 1152, 1231, 1104, 1251, 1124, 1251, 1084, 1253, 1153, 1242, 1152)
ENGLISH = load_frequency_table()


def brute_force_schedules(values, n_keys, alphabet, width):
    """Every key schedule decoding ``values`` into ``alphabet``, by trying all keys from 0."""
    decode = {rev_digits(ord(ch), width): ch for ch in alphabet}
    per_class = []
    for cls in range(n_keys):
        vals = values[cls::n_keys]
        if not vals:
            per_class.append([None])
            continue
        per_class.append([k for k in range(min(vals) + 1) if all((v - k) in decode for v in vals)])
    return set(itertools.product(*per_class))


# frequency table


def test_bundled_table():
    assert ENGLISH.name == "english_v1"
    assert len(ENGLISH.freqs) == 26
    assert abs(sum(ENGLISH.freqs) - 1) <= 1e-9
    assert max(string.ascii_uppercase, key=ENGLISH.__getitem__) == "E"


def test_table_parse_errors():
    good = "".join(f"{c} {1/26}\n" for c in string.ascii_uppercase)
    assert abs(sum(parse_frequency_table(good).freqs) - 1) < 1e-9
    with pytest.raises(InvalidFrequencyTable):
        parse_frequency_table(good.replace("Q ", "A "))
    with pytest.raises(InvalidFrequencyTable):
        parse_frequency_table("\n".join(good.splitlines()[:25]))
    with pytest.raises(InvalidFrequencyTable):
        parse_frequency_table(good.replace(f"Z {1/26}", "Z x"))
    with pytest.raises(InvalidFrequencyTable):
        parse_frequency_table(good.replace(f"Z {1/26}", "Z 0.5"))
    with pytest.raises(InvalidFrequencyTable):
        FrequencyTable((0.5,) * 26)


def test_custom_table_file(tmp_path):
    path = tmp_path / "flat.txt"
    path.write_text("".join(f"{c} {1/26:.12f}\n" for c in string.ascii_uppercase))
    table = load_frequency_table(path)
    assert table.name == "flat"
    assert chi_squared_score(string.ascii_uppercase, table) == pytest.approx(0, abs=1e-6)


# chi-squared


@pytest.mark.parametrize("text", ["EEEE", "QQQQ", "RESPECTEVERYONE", "THEQUICKBROWNFOX"])
def test_chi_squared_matches_scipy(text):
    observed = [text.count(c) for c in string.ascii_uppercase]
    expected = [f * len(text) for f in ENGLISH.freqs]
    assert chi_squared_score(text, ENGLISH) == pytest.approx(chisquare(observed, expected).statistic, rel=1e-9)


def test_chi_squared_orders_letters():
    assert chi_squared_score("EEEE", ENGLISH) < chi_squared_score("QQQQ", ENGLISH)


def test_chi_squared_zero_at_expected():
    flat = FrequencyTable((1 / 26,) * 26)
    assert chi_squared_score(string.ascii_uppercase * 40, flat) == pytest.approx(0, abs=1e-9)


def test_chi_squared_errors():
    with pytest.raises(EmptyText):
        chi_squared_score("", ENGLISH)
    with pytest.raises(AlphabetViolation):
        chi_squared_score("ABc", ENGLISH)


@given(st.text(st.sampled_from(string.ascii_uppercase), min_size=1, max_size=60), st.randoms())
def test_chi_squared_permutation_invariant(text, rnd):
    shuffled = list(text)
    rnd.shuffle(shuffled)
    assert chi_squared_score("".join(shuffled), ENGLISH) == pytest.approx(chi_squared_score(text, ENGLISH))


# known plaintext


def test_known_plaintext_golden():
    rec = known_plaintext_attack(GOLDEN_TEXT, GOLDEN_CT)
    assert rec.keys == (1056, 1155)
    assert rec.to_schedule() == KeySchedule.of(1056, 1155)


def test_known_plaintext_partial():
    rec = known_plaintext_attack("M", (231,))
    assert rec.keys == (154, None)
    assert not rec.complete
    with pytest.raises(ValueError):
        rec.to_schedule()


def test_known_plaintext_classes_independent():
    assert known_plaintext_attack("RR", (1084, 1085)).keys == (1056, 1057)


def test_known_plaintext_inconsistent():
    with pytest.raises(InconsistentPair):
        known_plaintext_attack("RRR", (1084, 1085, 1090))


def test_known_plaintext_length_mismatch():
    with pytest.raises(LengthMismatch):
        known_plaintext_attack("AB", (1,))


@given(
    st.text(st.characters(min_codepoint=10, max_codepoint=99), min_size=1, max_size=40),
    st.lists(st.integers(0, 10**6), min_size=1, max_size=5),
)
def test_known_plaintext_soundness(text, keys):
    schedule = KeySchedule(tuple(keys))
    rec = known_plaintext_attack(text, encrypt(text, schedule), n_keys=len(keys))
    for cls, k in enumerate(rec.keys):
        assert k == (keys[cls] if cls < len(text) else None)


# ciphertext only


def test_ciphertext_only_golden():
    report = ciphertext_only_attack(GOLDEN_CT, PAPER, ENGLISH)
    assert (1056, 1155) in {c.keys for c in report.candidates}
    top = report.candidates[report.rank_of_keys((1056, 1155)) - 1]
    assert top.plaintext == GOLDEN_TEXT
    assert report.rank_of(GOLDEN_TEXT) is not None
    assert {c.keys for c in report.candidates} == brute_force_schedules(GOLDEN_CT, 2, string.ascii_uppercase, 2)


def test_ciphertext_only_degenerate():
    values = encrypt("EEEE", KeySchedule.of(200, 300)).values
    assert values == (296, 396, 296, 396)
    report = ciphertext_only_attack(values, PAPER, ENGLISH)
    keys = {c.keys for c in report.candidates}
    assert (200, 300) in keys
    assert keys == brute_force_schedules(values, 2, string.ascii_uppercase, 2)
    assert len(keys) == 26 * 26  # every letter fits each single-value class


def test_ciphertext_only_sorted_with_tiebreak():
    report = ciphertext_only_attack((296, 396, 296, 396), PAPER, ENGLISH)
    order = [(c.score, c.keys) for c in report.candidates]
    assert order == sorted(order)
    assert all(c.score >= 0 for c in report.candidates)


def test_ciphertext_only_single_value_leaves_class_undetermined():
    report = ciphertext_only_attack((231,), PAPER, ENGLISH)
    assert all(c.keys[1] is None for c in report.candidates)
    assert (154, None) in {c.keys for c in report.candidates}
    assert any("undetermined" in note for note in report.notes)


def test_ciphertext_only_errors():
    with pytest.raises(EmptyCiphertext):
        ciphertext_only_attack((), PAPER, ENGLISH)
    with pytest.raises(CandidateLimitExceeded):
        ciphertext_only_attack((296, 396, 296, 396), PAPER, ENGLISH, limit=100)
    with pytest.raises(AlphabetViolation):
        ciphertext_only_attack((296,), PAPER, ENGLISH, alphabet="xyz")


def test_ciphertext_only_extended_mode_and_three_keys():
    schedule = KeySchedule.of(5000, 17, 900)
    text = "ATTACKATDAWNONTHEEASTERNFRONT"
    ct = encrypt(text, schedule, EXTENDED)
    report = ciphertext_only_attack(ct, EXTENDED, ENGLISH, n_keys=3)
    keys = {c.keys for c in report.candidates}
    assert (5000, 17, 900) in keys
    assert keys == brute_force_schedules(ct.values, 3, string.ascii_uppercase, 3)


@settings(max_examples=40, deadline=None)
@given(
    st.text(st.sampled_from(string.ascii_uppercase), min_size=2, max_size=30),
    st.integers(0, 3000),
    st.integers(0, 3000),
)
def test_ciphertext_only_completeness(text, k1, k2):
    ct = encrypt(text, KeySchedule.of(k1, k2))
    report = ciphertext_only_attack(ct, PAPER, ENGLISH)
    ranks = [i for i, c in enumerate(report.candidates) if c.keys == (k1, k2)]
    assert len(ranks) == 1
    assert report.candidates[ranks[0]].plaintext == text


# diffusion


def test_diffusion_golden():
    report = diffusion_report(GOLDEN_TEXT, GOLDEN_CT)
    assert dict(report.mapping["E"]) == {1251: 3, 1152: 2}
    assert report.distinct("E") == {1251, 1152}
    assert report.max_distinct == 2
    assert sum(sum(c.values()) for c in report.mapping.values()) == len(GOLDEN_TEXT)


def test_diffusion_small():
    report = diffusion_report("M", (231,))
    assert dict(report.mapping) == {"M": {231: 1}}
    assert report.max_distinct == 1
    assert diffusion_report("", ()).max_distinct == 0
    with pytest.raises(LengthMismatch):
        diffusion_report("MM", (231,))


@given(st.text(st.sampled_from("ABCDE"), max_size=50), st.lists(st.integers(0, 5000), min_size=1, max_size=4))
def test_diffusion_bounded_by_key_count(text, keys):
    ct = encrypt(text, KeySchedule(tuple(keys)))
    assert diffusion_report(text, ct).max_distinct <= len(keys)


def test_random_known_plaintext_trials():
    rng = random.Random(7)
    for _ in range(50):
        text = "".join(rng.choice(string.ascii_uppercase) for _ in range(rng.randint(2, 40)))
        keys = (rng.randint(0, 10**5), rng.randint(0, 10**5))
        assert known_plaintext_attack(text, encrypt(text, KeySchedule(keys))) == PartialSchedule(keys)
