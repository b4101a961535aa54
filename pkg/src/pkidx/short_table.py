"""Tabulated answers for short patterns.

Every pattern of length 1..max_len gets a slot holding the deepest explicit
suffix-tree node whose string is a prefix of it.  Slots for length ``m`` are
laid out in lexicographic (base-sigma) order after all shorter lengths.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .suffix import SuffixTree


def max_short_length(sigma: int, n: int) -> int:
    """Largest m with sigma + sigma^2 + ... + sigma^m <= n."""
    total, m, p = 0, 0, 1
    while True:
        p *= sigma
        if total + p > n:
            return m
        total += p
        m += 1


@dataclass
class ShortPatternTable:
    max_len: int
    sigma: int
    offsets: list[int]  # offsets[m] = first slot of length-m patterns, m = 1..max_len+1
    entries: array

    def __len__(self) -> int:
        return len(self.entries)

    def lookup_dp(self, p: Sequence[int]) -> int:
        return lookup_dp(self, p)


def _offsets(sigma: int, max_len: int) -> list[int]:
    offs = [0, 0]
    for m in range(1, max_len + 1):
        offs.append(offs[-1] + sigma ** m)
    return offs


def pattern_index(p: Sequence[int], sigma: int, offsets: Sequence[int] | None = None) -> int:
    m = len(p)
    if m < 1:
        raise ValueError("pattern must be nonempty")
    if offsets is None:
        base = sum(sigma ** i for i in range(1, m))
    else:
        if m >= len(offsets) - 1:
            raise ValueError(f"pattern length {m} exceeds the table")
        base = offsets[m]
    v = 0
    for c in p:
        if not 1 <= c <= sigma:
            raise ValueError(f"code {c} outside 1..{sigma}")
        v = v * sigma + (c - 1)
    return base + v


def decode_index(idx: int, sigma: int) -> list[int]:
    """Inverse of pattern_index."""
    m, base = 1, 0
    while idx >= base + sigma ** m:
        base += sigma ** m
        m += 1
    v = idx - base
    out = []
    for _ in range(m):
        v, d = divmod(v, sigma)
        out.append(d + 1)
    return out[::-1]


def build_short_table(tree: SuffixTree, codes: Sequence[int], sigma: int, n: int) -> ShortPatternTable:
    """``codes`` are the text codes (terminator optional)."""
    max_len = max_short_length(sigma, n)
    offsets = _offsets(sigma, max_len)
    size = offsets[max_len + 1]
    entries = np.full(size, -1, dtype=np.int64)
    if max_len == 0:
        return ShortPatternTable(0, sigma, offsets, array("q"))

    # value of each internal node's string in base sigma, parents first (preorder ids)
    depth = np.frombuffer(tree.depth, dtype=np.int64)
    internal = np.diff(np.frombuffer(tree.child_ptr, dtype=np.int64)) > 0
    cand = np.flatnonzero(internal & (depth >= 1) & (depth <= max_len))
    value = {0: 0}
    exact: dict[int, list[tuple[int, int]]] = {}
    par, edge_start = tree.parent, tree.edge_start
    for v in cand.tolist():
        u = par[v]
        pd = tree.depth[u]
        d = tree.depth[v]
        x = value[u]
        s = edge_start[v]
        for pos in range(s, s + d - pd):
            x = x * sigma + codes[pos] - 1
        value[v] = x
        exact.setdefault(d, []).append((x, v))

    prev = np.zeros(1, dtype=np.int64)  # length 0: the root
    for m in range(1, max_len + 1):
        block = np.repeat(prev, sigma)
        if m in exact:
            idx, nodes = zip(*exact[m])
            block[list(idx)] = nodes
        dst = entries[offsets[m]:offsets[m + 1]]
        assert (dst == -1).all(), "table slot written twice"
        dst[:] = block
        prev = block
    return ShortPatternTable(max_len, sigma, offsets, array("q", entries.tobytes()))


def lookup_dp(tab: ShortPatternTable, p: Sequence[int]) -> int:
    if not 1 <= len(p) <= tab.max_len:
        raise ValueError(f"pattern length {len(p)} outside 1..{tab.max_len}")
    return tab.entries[pattern_index(p, tab.sigma, tab.offsets)]
