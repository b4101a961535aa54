"""Invariant suites run by ``pkidx verify`` and by the test-suite.

Each check returns a SuiteResult; a suite never raises on bad data, it
records the failure instead so a damaged index can still be reported on.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .heavy import MicroKind, build_heavy_index
from .oracle import NaiveIndex, naive_deepest_prefix_node, naive_lcp
from .packed import chunk_word
from .query import PackedIndex
from .short_table import decode_index

MAX_FAILURES = 5


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    skipped: bool = False

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, msg: str) -> None:
        if len(self.failures) < MAX_FAILURES:
            self.failures.append(msg)
        elif len(self.failures) == MAX_FAILURES:
            self.failures.append("...")

    def line(self) -> str:
        status = "skip" if self.skipped else ("pass" if self.passed else "FAIL")
        out = f"{self.name}\t{status}\tchecked={self.checked}"
        if self.failures:
            out += "\t" + "; ".join(self.failures)
        return out


# -- structure ---------------------------------------------------------------


def check_suffix_array(idx: PackedIndex, samples: int, rng: random.Random) -> SuiteResult:
    res = SuiteResult("suffix-array")
    n = idx.n
    sa = np.asarray(idx.sa.sa, dtype=np.int64)
    res.checked += 1
    if len(sa) != n or (n and (sa.min() < 0 or sa.max() >= n or len(np.unique(sa)) != n)):
        res.fail("sa is not a permutation of 0..n-1")
        return res
    if samples <= 0 or n < 2:
        return res
    raw = idx.text.to_bytes()
    for _ in range(samples):
        i = rng.randrange(n - 1)
        a, b = idx.sa.sa[i], idx.sa.sa[i + 1]
        res.checked += 1
        # raw suffixes compare like suffix+$ because $ is the smallest code
        if not raw[a:] < raw[b:]:
            res.fail(f"sa[{i}]={a} and sa[{i + 1}]={b} are out of order")
        lcp = naive_lcp(raw, a, b)
        if idx.sa.lcp[i + 1] != lcp:
            res.fail(f"lcp[{i + 1}]={idx.sa.lcp[i + 1]}, expected {lcp}")
    return res


def check_tree(idx: PackedIndex) -> SuiteResult:
    res = SuiteResult("suffix-tree")
    tree = idx.tree
    num = tree.num_nodes
    for v in range(1, num):
        res.checked += 1
        u = tree.parent[v]
        if not 0 <= u < v:
            res.fail(f"node {v} has parent {u} outside preorder")
            continue
        if not (tree.sa_lo[u] <= tree.sa_lo[v] < tree.sa_hi[v] <= tree.sa_hi[u]):
            res.fail(f"node {v} sa range is not nested in its parent's")
        if tree.depth[v] <= tree.depth[u]:
            res.fail(f"node {v} is not deeper than its parent")
    for r in range(idx.n):
        leaf = tree.leaf_of_sa[r]
        res.checked += 1
        if not (0 <= leaf < num and tree.sa_lo[leaf] == r and tree.sa_hi[leaf] == r + 1):
            res.fail(f"leaf of rank {r} is wrong")
    return res


def check_short_table(idx: PackedIndex, limit: Optional[int] = None) -> SuiteResult:
    """Every slot against a character-by-character walk; table size <= n."""
    res = SuiteResult("short-table")
    tab = idx.short
    res.checked += 1
    if len(tab) > max(idx.n, 0):
        res.fail(f"table has {len(tab)} slots for n={idx.n}")
    codes = idx.text.codes_array().tolist()
    total = len(tab) if limit is None else min(limit, len(tab))
    for slot in range(total):
        p = decode_index(slot, tab.sigma)
        want = naive_deepest_prefix_node(idx.tree, codes, p)
        res.checked += 1
        if tab.entries[slot] != want:
            res.fail(f"slot {slot} ({p}) holds {tab.entries[slot]}, expected {want}")
    return res


def check_heavy_bounds(idx: PackedIndex) -> SuiteResult:
    """Heavy-leaf/branching counts and the promotion ledger constants."""
    res = SuiteResult("heavy-bounds")
    hv = idx.heavy
    n, t = idx.n, hv.threshold
    c = hv.classification.counts()
    res.checked += 2
    if c["heavy_leaf"] * t > n:
        res.fail(f"{c['heavy_leaf']} heavy leaves exceed n/t={n / t:.1f}")
    if c["heavy_branching"] * t > n:
        res.fail(f"{c['heavy_branching']} heavy branching nodes exceed n/t={n / t:.1f}")
    non_branching = c["heavy"] - c["heavy_branching"]
    lg = hv.ledger
    res.checked += 4
    if lg.type1 * t > 3 * n:
        res.fail(f"type1 promotions {lg.type1} exceed 3n/t")
    if lg.type2a > 2 * non_branching:
        res.fail(f"type2a promotions {lg.type2a} exceed 2 x {non_branching}")
    if lg.type2b > c["heavy"]:
        res.fail(f"type2b promotions {lg.type2b} exceed {c['heavy']}")
    if lg.total != len(hv.promoted_lower) or lg.total > lg.type1 + lg.type2a + lg.type2b:
        res.fail("ledger total disagrees with the promoted node list")
    return res


def check_navigation(idx: PackedIndex) -> SuiteResult:
    """Each Type1 nav key reaches the micro tree rooted at the matching micro leaf."""
    res = SuiteResult("navigation")
    hv = idx.heavy
    alpha, bits = idx.alphabet.alpha, idx.alphabet.bits
    sa, tree, tw = idx.sa.sa, idx.tree, idx.text.words
    for mt in hv.micro:
        if mt.kind is not MicroKind.TYPE1:
            continue
        if mt.nav is None:
            res.fail(f"type1 micro tree {mt.index} has no dictionary")
            continue
        keys = dict(mt.nav.pairs())
        res.checked += 1
        if len(keys) != len(mt.leaves):
            res.fail(f"micro tree {mt.index}: {len(keys)} keys for {len(mt.leaves)} leaves")
        for leaf in mt.leaves:
            c = hv.lower(leaf)
            word = chunk_word(tw, alpha, bits, sa[tree.sa_lo[c]] + mt.depth, alpha)
            nxt = mt.nav.lookup(word)
            res.checked += 1
            if nxt is None or not 0 <= nxt < len(hv.micro):
                res.fail(f"micro tree {mt.index}: leaf {leaf} is unreachable")
                continue
            child = hv.micro[nxt]
            if child.root != leaf or child.depth != mt.depth + alpha:
                res.fail(f"micro tree {mt.index}: key for leaf {leaf} leads to micro tree {nxt}")
        for key in keys:
            for flip in (1, 1 << (alpha * bits - 1)):
                other = key ^ flip
                if other in keys:
                    continue
                res.checked += 1
                if mt.nav.lookup(other) is not None:
                    res.fail(f"micro tree {mt.index}: absent key {other:#x} resolves")
    return res


def check_recomputed(idx: PackedIndex) -> SuiteResult:
    """Rebuild the heavy decomposition from the stored tree and compare."""
    res = SuiteResult("stats-consistency")
    hv = idx.heavy
    try:
        again = build_heavy_index(idx.tree, idx.sa, idx.text, hv.threshold)
    except Exception as e:  # damaged arrays can break the rebuild itself
        res.fail(f"rebuild failed: {e}")
        return res
    res.checked += 3
    if again.kind_counts() != hv.kind_counts():
        res.fail(f"micro kinds {hv.kind_counts()} != recomputed {again.kind_counts()}")
    if again.ledger.as_dict() != hv.ledger.as_dict():
        res.fail(f"ledger {hv.ledger.as_dict()} != recomputed {again.ledger.as_dict()}")
    if (again.promoted_lower, again.promoted_depth) != (list(hv.promoted_lower), list(hv.promoted_depth)):
        res.fail("promoted nodes differ from recomputation")
    return res


# -- queries -----------------------------------------------------------------


def sample_patterns(raw: bytes, count: int, rng: random.Random, alpha: int) -> list[bytes]:
    """Substrings, perturbed substrings and random strings over the text's bytes."""
    n = len(raw)
    symbols = sorted(set(raw)) or [0]
    out = []
    for k in range(count):
        kind = k % 3
        m = rng.choice([1, 2, alpha - 1, alpha, alpha + 1, 2 * alpha + 3, rng.randint(1, 3 * alpha)])
        m = max(1, min(m, n))
        if kind == 2:
            out.append(bytes(rng.choice(symbols) for _ in range(m)))
            continue
        i = rng.randrange(n - m + 1)
        p = bytearray(raw[i:i + m])
        if kind == 1:
            p[rng.randrange(m)] = rng.choice(symbols)
        out.append(bytes(p))
    return out


def check_differential(idx: PackedIndex, samples: int, rng: random.Random) -> SuiteResult:
    res = SuiteResult("differential")
    if samples <= 0 or idx.n == 0:
        res.skipped = True
        return res
    raw = idx.text.to_bytes()
    naive = NaiveIndex(raw)
    for p in sample_patterns(raw, samples, rng, idx.alphabet.alpha):
        res.checked += 1
        try:
            cnt, locs, pred = idx.query(p)
        except Exception as e:
            res.fail(f"{p!r}: query raised {type(e).__name__}: {e}")
            continue
        if cnt != naive.count(p) or sorted(locs) != naive.locate(p):
            res.fail(f"{p!r}: count/locate disagree with the oracle")
        elif pred != naive.predecessor(p):
            res.fail(f"{p!r}: predecessor {pred}, expected {naive.predecessor(p)}")
    return res


def run_all(idx: PackedIndex, samples: int = 200, seed: int = 0,
            checksum_ok: bool = True) -> list[SuiteResult]:
    rng = random.Random(seed)
    results = [SuiteResult("checksum", 1, [] if checksum_ok else ["stored checksum does not match"])]
    suites = [
        ("suffix-array", lambda: check_suffix_array(idx, samples, rng)),
        ("suffix-tree", lambda: check_tree(idx)),
        ("short-table", lambda: check_short_table(idx, limit=None if samples else 0)),
        ("heavy-bounds", lambda: check_heavy_bounds(idx)),
        ("navigation", lambda: check_navigation(idx)),
        ("stats-consistency", lambda: check_recomputed(idx)),
        ("differential", lambda: check_differential(idx, samples, rng)),
    ]
    for name, fn in suites:
        try:
            results.append(fn())
        except Exception as e:
            results.append(SuiteResult(name, 0, [f"crashed: {type(e).__name__}: {e}"]))
    return results


def stats(idx: PackedIndex) -> dict:
    hv = idx.heavy
    c = hv.classification.counts()
    out = {
        "n": idx.n,
        "sigma": idx.alphabet.sigma,
        "bits": idx.alphabet.bits,
        "alpha": idx.alphabet.alpha,
        "t": hv.threshold,
        "tree_nodes": idx.tree.num_nodes,
        "heavy": c["heavy"],
        "heavy_leaf": c["heavy_leaf"],
        "heavy_branching": c["heavy_branching"],
        "short_max_len": idx.short.max_len,
        "short_table_size": len(idx.short),
        "micro_trees": len(hv.micro),
    }
    for k, v in hv.kind_counts().items():
        out[f"micro_{k}"] = v
    for k, v in hv.ledger.as_dict().items():
        out[f"promoted_{k}"] = v
    return out
