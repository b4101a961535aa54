import random

import pytest

from pkidx.heavy import MicroKind, classify_heavy, heavy_threshold
from pkidx.packed import encode_key
from pkidx.query import PackedIndex
from pkidx.verify import check_heavy_bounds, check_navigation


def _string(idx, v):
    """Codes spelled from the root to node or promoted point v."""
    hv = idx.heavy
    c, d = hv.lower(v), hv.node_depth(v)
    codes = idx.text.codes_array().tolist()
    s = idx.sa.sa[idx.tree.sa_lo[c]]
    return codes[s:s + d]


def test_threshold_formula():
    assert heavy_threshold(2) == 2
    assert heavy_threshold(16) == 4      # log2 log2 16 = 2
    assert heavy_threshold(2 ** 16) == 16
    assert heavy_threshold(10 ** 6) >= 18


def test_root_heavy_leaves_light():
    idx = PackedIndex.build(b"mississippi", threshold=2)
    hc = idx.heavy.classification
    assert hc.heavy[0]
    for v in range(idx.tree.num_nodes):
        if idx.tree.is_leaf(v):
            assert not hc.heavy[v]


def test_heavy_set_matches_leaf_counts():
    rng = random.Random(5)
    raw = bytes(rng.choice(b"ab") for _ in range(4096))
    idx = PackedIndex.build(raw)
    t = idx.heavy.threshold
    hc = classify_heavy(idx.tree, idx.n)
    for v in range(idx.tree.num_nodes):
        d = idx.tree.depth[v]
        s = idx.sa.sa[idx.tree.sa_lo[v]]
        path = raw[s:s + d]
        if len(path) < d:  # leaf: path ends with the terminator
            leaves = 1
        else:
            leaves = sum(1 for i in range(idx.n) if raw.startswith(path, i))
        assert hc.heavy[v] == (leaves >= t)


def test_unary_text_is_all_type2a():
    idx = PackedIndex.build(b"a" * 1000)
    kinds = {mt.kind for mt in idx.heavy.micro}
    assert kinds == {MicroKind.TYPE2A}


def test_shallow_heavy_tree_single_layer():
    rng = random.Random(6)
    raw = bytes(rng.choice(b"ACGT") for _ in range(500))
    idx = PackedIndex.build(raw, threshold=50)
    assert {mt.depth for mt in idx.heavy.micro} == {0}
    assert len(idx.heavy.micro) == 1


def test_no_heavy_nodes_when_n_below_t():
    idx = PackedIndex.build(b"abcab", threshold=8)
    assert not idx.heavy.classification.heavy.any()
    assert idx.heavy.micro == []
    assert idx.count(b"ab") == 2
    assert idx.predecessor(b"b") == 0  # "abcab" is the largest suffix below "b"


@pytest.mark.parametrize("t", [2, 3, 8])
def test_micro_leaves_one_word_below_root(t):
    rng = random.Random(t)
    raw = bytes(rng.choice(b"ab") for _ in range(3000))
    idx = PackedIndex.build(raw, threshold=t)
    hv, alpha = idx.heavy, idx.alphabet.alpha
    assert check_heavy_bounds(idx).passed
    assert check_navigation(idx).passed
    for mt in hv.micro:
        assert mt.depth % alpha == 0
        root = _string(idx, mt.root)
        assert len(root) == mt.depth
        for leaf in mt.leaves:
            s = _string(idx, leaf)
            assert len(s) == mt.depth + alpha and s[:mt.depth] == root


def test_banana_light_children():
    idx = PackedIndex.build(b"banana", threshold=2)
    hv, tree = idx.heavy, idx.tree
    heavy = hv.classification.heavy
    alpha, bits = idx.alphabet.alpha, idx.alphabet.bits
    mt = hv.micro[0]
    want = {}
    for u in range(tree.num_nodes):
        if not heavy[u]:
            continue
        for ch in tree.children(u):
            if not heavy[ch]:
                s = _string(idx, ch)[:alpha]
                want[encode_key(s, alpha, bits)] = ch
    assert dict(mt.light_pred.pairs()) == want
    # "a" is heavy with the light leaf "a$" below it
    a = next(v for v in tree.children(0) if _string(idx, v) == [1])
    assert heavy[a]
    assert any(_string(idx, v) == [1, 0] for v in want.values())


def test_heavy_pred_keys_follow_string_order():
    rng = random.Random(8)
    raw = bytes(rng.choice(b"abc") for _ in range(2000))
    idx = PackedIndex.build(raw, threshold=3)
    for mt in idx.heavy.micro:
        pairs = mt.heavy_pred.pairs()
        strings = [_string(idx, v)[mt.depth:] for _, v in pairs]
        assert strings == sorted(strings)


def test_ledger_counts_promoted_nodes():
    rng = random.Random(10)
    block = bytes(rng.choice(b"ab") for _ in range(37))
    raw = b"".join(block + bytes([rng.choice(b"ab")]) for _ in range(120))
    idx = PackedIndex.build(raw, threshold=2)
    lg = idx.heavy.ledger
    assert lg.total == len(idx.heavy.promoted_lower) > 0
    for c, d in zip(idx.heavy.promoted_lower, idx.heavy.promoted_depth):
        parent = idx.tree.parent[c]
        assert idx.tree.depth[parent] < d < idx.tree.depth[c]
