import random

from hypothesis import given, settings, strategies as st

from pkidx.oracle import naive_lcp, naive_suffix_array
from pkidx.packed import build_alphabet, pack
from pkidx.suffix import build_suffix_array, build_suffix_tree, child_by_code, lcp_query, sa_is


def _build(raw):
    t = pack(raw, build_alphabet(raw))
    ix = build_suffix_array(t)
    return t, ix, build_suffix_tree(ix, t)


def test_banana_sa():
    _, ix, _ = _build(b"banana")
    assert ix.sa == [5, 3, 1, 0, 4, 2]


def test_single_char_and_unary():
    _, ix, _ = _build(b"a")
    assert ix.sa == [0]
    _, ix, _ = _build(b"aaaa")
    assert ix.sa == [3, 2, 1, 0]
    assert ix.lcp == [0, 1, 2, 3]


def test_lcp_query_examples():
    _, ix, _ = _build(b"banana")
    r = ix.rank
    assert lcp_query(ix, r[3], r[1]) == 3
    assert lcp_query(ix, r[5], r[0]) == 0
    assert lcp_query(ix, r[2], r[2]) == 4


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(1, 4), min_size=1, max_size=120))
def test_sa_is_matches_sort(codes):
    assert sa_is(codes, 4) == naive_suffix_array(codes)


def test_lcp_rmq_random():
    rng = random.Random(3)
    for _ in range(40):
        raw = bytes(rng.choice(b"ab") for _ in range(rng.randint(2, 300)))
        _, ix, _ = _build(raw)
        for _ in range(50):
            i, j = rng.randrange(ix.n), rng.randrange(ix.n)
            want = naive_lcp(raw, ix.sa[i], ix.sa[j]) if i != j else ix.n - ix.sa[i]
            assert lcp_query(ix, i, j) == want


def _brute_nodes(raw):
    """Strings of the branching nodes of the suffix trie (root excluded)."""
    sufs = [raw[i:] + b"\0" for i in range(len(raw))]
    out = set()
    for s in sufs:
        for k in range(1, len(s)):
            nexts = {t[k] for t in sufs if t[:k] == s[:k] and len(t) > k}
            if len(nexts) >= 2:
                out.add(s[:k])
    return out


def test_tree_banana():
    t, ix, tree = _build(b"banana")
    kids = tree.children(0)
    firsts = sorted(t.char_at(tree.edge_start[c]) for c in kids)
    assert firsts == [1, 2, 3]  # no terminator-only leaf
    a_node = next(c for c in kids if t.char_at(tree.edge_start[c]) == 1)
    assert (tree.sa_lo[a_node], tree.sa_hi[a_node]) == (0, 3)
    assert tree.depth[a_node] == 1


def test_tree_unary():
    _, _, tree = _build(b"aaaa")
    assert len(tree.children(0)) == 1
    leaves = [v for v in range(tree.num_nodes) if tree.is_leaf(v)]
    assert len(leaves) == 4


def test_tree_single():
    _, _, tree = _build(b"x")
    assert tree.num_nodes == 2


def test_tree_matches_brute_force():
    rng = random.Random(11)
    for _ in range(60):
        raw = bytes(rng.choice(b"abc"[: rng.randint(1, 3)]) for _ in range(rng.randint(1, 40)))
        t, ix, tree = _build(raw)
        codes = t.codes_array().tolist()
        internal = set()
        for v in range(1, tree.num_nodes):
            d = tree.depth[v]
            s = ix.sa[tree.sa_lo[v]]
            path = bytes(codes[s:s + d])
            assert tree.leaf_count(v) == sum(1 for i in range(len(raw)) if bytes(codes[i:i + d]) == path)
            if not tree.is_leaf(v):
                internal.add(path)
        lut = {c: s for s, c in t.alphabet.symbol_to_code.items()}
        lut[0] = 0
        want = _brute_nodes(raw)
        assert {bytes(lut[c] for c in p) for p in internal} == want


def test_child_by_code_examples():
    t, _, tree = _build(b"banana")
    b_child = child_by_code(tree, 0, 2)
    assert b_child.exact and t.char_at(tree.edge_start[b_child.child]) == 2
    pred = child_by_code(tree, 0, 4)
    assert not pred.exact and t.char_at(tree.edge_start[pred.child]) == 3
    # root children start at codes 1..3, so the terminator code has no predecessor edge
    assert child_by_code(tree, 0, 0) is None
    na = next(v for v in range(tree.num_nodes)
              if tree.depth[v] == 2 and t.char_at(tree.edge_start[v]) == 3)
    assert child_by_code(tree, na, 0).exact
