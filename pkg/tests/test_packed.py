import random

import pytest
from hypothesis import given, settings, strategies as st

from pkidx.packed import (
    Chunk, PackingError, build_alphabet, char_at, chunk_compare, compare_run, encode_key,
    extract_chunk, first_mismatch, key_lcp, key_prefix, pack,
)


def test_alphabet_banana():
    a = build_alphabet(b"banana")
    assert a.sigma == 3
    assert a.symbol_to_code == {ord("a"): 1, ord("b"): 2, ord("n"): 3}
    assert (a.bits, a.alpha) == (2, 32)


def test_alphabet_unary_and_dna():
    a = build_alphabet(b"aaaa")
    assert (a.sigma, a.bits, a.alpha) == (1, 1, 64)
    d = build_alphabet(b"ACGTTGCA")
    assert (d.sigma, d.bits, d.alpha) == (4, 3, 21)


def test_alphabet_full_byte_range():
    a = build_alphabet(bytes(range(256)))
    assert (a.sigma, a.bits, a.alpha) == (256, 9, 7)


def test_empty_text_rejected():
    with pytest.raises(PackingError):
        build_alphabet(b"")


def test_pack_ab_layout():
    t = pack(b"ab", build_alphabet(b"ab"))
    assert t.words[0] & 0b111111 == 0b001001  # positions 0,1,2 = 01, 10, 00
    assert len(t.words) == 1


def test_banana_codes():
    t = pack(b"banana", build_alphabet(b"banana"))
    assert [char_at(t, i) for i in range(7)] == [2, 1, 3, 1, 3, 1, 0]
    with pytest.raises(IndexError):
        char_at(t, 7)


def test_pack_rejects_foreign_byte():
    with pytest.raises(PackingError, match="position 2"):
        pack(b"abz", build_alphabet(b"ab"))


def test_extract_chunk_examples():
    t = pack(b"banana", build_alphabet(b"banana"))
    assert extract_chunk(t, 1, 3).codes() == [1, 3, 1]
    assert extract_chunk(t, 0, 0).word == 0
    c = extract_chunk(t, 4, 4)
    assert c.codes(4) == [3, 1, 0, 0]
    assert c.valid_len == 3


def _chunk(codes, bits=2):
    w = 0
    for i, c in enumerate(codes):
        w |= c << (i * bits)
    return Chunk(w, len(codes), bits)


def test_first_mismatch_examples():
    assert first_mismatch(_chunk([1, 3, 1]), _chunk([1, 3, 1])) is None
    assert first_mismatch(_chunk([1, 3, 1]), _chunk([1, 3, 2])) == 2
    assert first_mismatch(_chunk([2, 1]), _chunk([1, 1])) == 0


def test_chunk_compare_examples():
    assert chunk_compare(_chunk([1, 0, 0]), _chunk([1, 3, 0])) == (-1, 1)
    assert chunk_compare(_chunk([2, 2]), _chunk([2, 2])) == (0, None)
    assert chunk_compare(_chunk([3, 1]), _chunk([2, 1])) == (1, 0)


@settings(max_examples=200, deadline=None)
@given(st.binary(min_size=1, max_size=200), st.data())
def test_extract_chunk_matches_char_at(raw, data):
    t = pack(raw, build_alphabet(raw))
    a = t.alphabet.alpha
    i = data.draw(st.integers(0, len(raw)))
    k = data.draw(st.integers(0, a))
    c = extract_chunk(t, i, k)
    want = [char_at(t, j) if j <= len(raw) else 0 for j in range(i, i + k)]
    assert c.codes(k) == want


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 5), min_size=1, max_size=30),
       st.lists(st.integers(1, 5), min_size=1, max_size=30),
       st.integers(0, 40), st.integers(0, 40))
def test_compare_run_matches_scan(a, b, oa, ob):
    alpha = build_alphabet(bytes(range(1, 6)))
    ta = pack(bytes(a), alpha)
    tb = pack(bytes(b), alpha)
    ca, cb = ta.codes_array().tolist(), tb.codes_array().tolist()
    oa, ob = oa % len(ca), ob % len(cb)
    length = min(len(ca) - oa, len(cb) - ob)
    matched, sign = compare_run(ta.words, oa, tb.words, ob, length, alpha.alpha, alpha.bits)
    k = 0
    while k < length and ca[oa + k] == cb[ob + k]:
        k += 1
    assert matched == k
    if k == length:
        assert sign == 0
    else:
        assert sign == (1 if ca[oa + k] > cb[ob + k] else -1)


def test_encode_key_examples():
    assert encode_key([], 32, 2) == 0
    assert encode_key([1], 32, 2) < encode_key([1, 1], 32, 2)
    with pytest.raises(ValueError):
        encode_key([1] * 33, 32, 2)


def test_encode_key_order_matches_string_order():
    rng = random.Random(7)
    for _ in range(20000):
        bits = rng.choice([1, 2, 3, 8])
        alpha = 64 // bits
        top = (1 << bits) - 1
        a = [rng.randint(1, top) for _ in range(rng.randint(0, alpha))]
        b = [rng.randint(1, top) for _ in range(rng.randint(0, alpha))]
        ka, kb = encode_key(a, alpha, bits), encode_key(b, alpha, bits)
        assert (ka < kb) == (a < b) and (ka == kb) == (a == b)
        lcp = 0
        while lcp < min(len(a), len(b)) and a[lcp] == b[lcp]:
            lcp += 1
        if a != b:
            assert key_lcp(ka, kb, alpha, bits) == lcp
        assert key_prefix(ka, lcp, alpha, bits) == encode_key(a[:lcp], alpha, bits)
