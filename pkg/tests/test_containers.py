import random
from bisect import bisect_right

import pytest
from hypothesis import given, settings, strategies as st

from pkidx.containers import DetDictionary, DetPredecessor, DuplicateKey, pred_query

WORD = (1 << 64) - 1


def distinct_keys(rng, k):
    out = set()
    while len(out) < k:
        out.add(rng.getrandbits(64))
    return sorted(out)


def test_dictionary_examples():
    assert DetDictionary([]).lookup(5) is None
    d = DetDictionary([(5, 100), (9, 200)])
    assert d.lookup(9) == 200
    assert d.lookup(7) is None


def test_dictionary_random_round_trip():
    rng = random.Random(1)
    keys = distinct_keys(rng, 10000)
    d = DetDictionary((k, i) for i, k in enumerate(keys))
    assert all(d.lookup(k) == i for i, k in enumerate(keys))
    present = set(keys)
    absent = [k for k in (rng.randrange(WORD) for _ in range(10000)) if k not in present]
    assert all(d.lookup(k) is None for k in absent)
    # slots <= 4 * sum(c^2) <= 16k, plus three words per top bucket (< 2k buckets)
    assert d.space() <= 22 * len(keys)


def test_dictionary_rejects_duplicates():
    with pytest.raises(DuplicateKey):
        DetDictionary([(1, 1), (1, 2)])


def test_dictionary_deterministic():
    rng = random.Random(2)
    pairs = [(k, i) for i, k in enumerate(distinct_keys(rng, 500))]
    a, b = DetDictionary(pairs), DetDictionary(list(pairs))
    assert (a.top_mult, list(a.slot_keys)) == (b.top_mult, list(b.slot_keys))
    shuffled = pairs[:]
    rng.shuffle(shuffled)
    c = DetDictionary(shuffled)
    assert all(c.lookup(k) == v for k, v in pairs)


def test_predecessor_examples():
    p = DetPredecessor([(3, 30), (8, 80)])
    assert p.predecessor(8) == (8, 80)
    assert p.predecessor(7) == (3, 30)
    assert p.predecessor(2) is None
    assert DetPredecessor([]).predecessor(5) is None


def _oracle(keys, q):
    i = bisect_right(keys, q)
    return keys[i - 1] if i else None


def test_predecessor_random_against_bisect():
    rng = random.Random(4)
    # clustered keys exercise shared high halves; spread keys exercise the fallback
    keys = sorted(set(distinct_keys(rng, 5000)
                      + [(7 << 32) | rng.randrange(1 << 32) for _ in range(5000)]))
    p = DetPredecessor((k, k & 0xFFFF) for k in keys)
    for _ in range(100000):
        q = rng.choice([rng.randrange(WORD), (7 << 32) | rng.randrange(1 << 32),
                        rng.choice(keys) + rng.choice([-1, 0, 1])])
        q = min(max(q, 0), WORD)
        want = _oracle(keys, q)
        got = pred_query(p, q)
        assert (got[0] if got else None) == want


@settings(max_examples=200, deadline=None)
@given(st.sets(st.integers(0, WORD), max_size=60), st.lists(st.integers(0, WORD), max_size=30))
def test_predecessor_property(keys, queries):
    keys = sorted(keys)
    p = DetPredecessor((k, i) for i, k in enumerate(keys))
    for q in queries + keys:
        got = p.predecessor(q)
        assert (got[0] if got else None) == _oracle(keys, q)
