"""Suffix array (induced sorting), LCP array with range-minimum queries, and
the suffix tree assembled from LCP intervals."""

from __future__ import annotations

from array import array
from bisect import bisect_right
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .packed import PackedText


def sa_is(s: Sequence[int], upper: int) -> list[int]:
    """Suffix array of ``s`` (values in 0..upper) by induced sorting.

    End of string sorts below every symbol.
    """
    n = len(s)
    if n == 0:
        return []
    if n == 1:
        return [0]
    if n == 2:
        return [0, 1] if s[0] < s[1] else [1, 0]

    sa = [0] * n
    ls = [False] * n
    for i in range(n - 2, -1, -1):
        ls[i] = ls[i + 1] if s[i] == s[i + 1] else s[i] < s[i + 1]

    sum_l = [0] * (upper + 1)
    sum_s = [0] * (upper + 1)
    for i in range(n):
        if not ls[i]:
            sum_s[s[i]] += 1
        else:
            sum_l[s[i] + 1] += 1
    for i in range(upper + 1):
        sum_s[i] += sum_l[i]
        if i < upper:
            sum_l[i + 1] += sum_s[i]

    def induce(lms: list[int]) -> None:
        for i in range(n):
            sa[i] = -1
        buf = sum_s[:]
        for d in lms:
            if d == n:
                continue
            sa[buf[s[d]]] = d
            buf[s[d]] += 1
        buf = sum_l[:]
        sa[buf[s[n - 1]]] = n - 1
        buf[s[n - 1]] += 1
        for i in range(n):
            v = sa[i]
            if v >= 1 and not ls[v - 1]:
                c = s[v - 1]
                sa[buf[c]] = v - 1
                buf[c] += 1
        buf = sum_l[:]
        for i in range(n - 1, -1, -1):
            v = sa[i]
            if v >= 1 and ls[v - 1]:
                c = s[v - 1] + 1
                buf[c] -= 1
                sa[buf[c]] = v - 1

    lms_map = [-1] * (n + 1)
    lms = []
    for i in range(1, n):
        if not ls[i - 1] and ls[i]:
            lms_map[i] = len(lms)
            lms.append(i)
    m = len(lms)

    induce(lms)

    if m:
        sorted_lms = [v for v in sa if lms_map[v] != -1]
        rec_s = [0] * m
        rec_upper = 0
        rec_s[lms_map[sorted_lms[0]]] = 0
        for i in range(1, m):
            left, right = sorted_lms[i - 1], sorted_lms[i]
            end_l = lms[lms_map[left] + 1] if lms_map[left] + 1 < m else n
            end_r = lms[lms_map[right] + 1] if lms_map[right] + 1 < m else n
            same = True
            if end_l - left != end_r - right:
                same = False
            else:
                while left < end_l:
                    if s[left] != s[right]:
                        break
                    left += 1
                    right += 1
                if left == n or s[left] != s[right]:
                    same = False
            if not same:
                rec_upper += 1
            rec_s[lms_map[sorted_lms[i]]] = rec_upper

        rec_sa = sa_is(rec_s, rec_upper)
        for i in range(m):
            sorted_lms[i] = lms[rec_sa[i]]
        induce(sorted_lms)
    return sa


def kasai_lcp(s: Sequence[int], sa: Sequence[int], rank: Sequence[int]) -> list[int]:
    n = len(s)
    lcp = [0] * n
    h = 0
    for i in range(n):
        r = rank[i]
        if r == 0:
            h = 0
            continue
        j = sa[r - 1]
        while i + h < n and j + h < n and s[i + h] == s[j + h]:
            h += 1
        lcp[r] = h
        if h:
            h -= 1
    return lcp


class SparseTable:
    """Range-minimum over a fixed integer array, O(1) per query."""

    def __init__(self, values: Sequence[int] | np.ndarray):
        base = np.asarray(values, dtype=np.int64)
        self.levels = [base]
        k = 1
        while 2 * k <= len(base):
            prev = self.levels[-1]
            self.levels.append(np.minimum(prev[:-k], prev[k:]))
            k *= 2
        # array rows: cheap scalar reads without numpy scalar boxing
        self._rows = [array("q", lv.tobytes()) for lv in self.levels]

    def query(self, lo: int, hi: int) -> int:
        """Minimum over values[lo..hi] inclusive."""
        k = (hi - lo + 1).bit_length() - 1
        row = self._rows[k]
        a, b = row[lo], row[hi - (1 << k) + 1]
        return a if a < b else b


@dataclass
class SuffixArrayIndex:
    sa: list[int]
    rank: list[int]
    lcp: list[int]
    rmq: SparseTable
    n: int

    def lcp_query(self, i: int, j: int) -> int:
        return lcp_query(self, i, j)


def build_suffix_array(t: PackedText) -> SuffixArrayIndex:
    codes = t.codes_array()[: t.length].tolist()
    sa = sa_is(codes, t.alphabet.sigma)
    return _index_from_sa(codes, sa)


def _index_from_sa(codes: Sequence[int], sa: list[int]) -> SuffixArrayIndex:
    n = len(sa)
    rank = [0] * n
    for i, p in enumerate(sa):
        rank[p] = i
    lcp = kasai_lcp(codes, sa, rank)
    return SuffixArrayIndex(sa, rank, lcp, SparseTable(lcp), n)


def suffix_array_from_arrays(sa: Sequence[int], lcp: Sequence[int]) -> SuffixArrayIndex:
    """Reassemble from stored arrays without validating them (used by the loader)."""
    sa = list(sa)
    n = len(sa)
    rank = [0] * n
    for i, p in enumerate(sa):
        if 0 <= p < n:
            rank[p] = i
    return SuffixArrayIndex(sa, rank, list(lcp), SparseTable(lcp), n)


def lcp_query(ix: SuffixArrayIndex, i: int, j: int) -> int:
    if i == j:
        return ix.n - ix.sa[i]
    if i > j:
        i, j = j, i
    return ix.rmq.query(i + 1, j)


class ChildMatch(NamedTuple):
    child: int
    exact: bool


class SuffixTree:
    """Compacted trie over the n suffixes, node ids in preorder (root = 0).

    Leaves spell ``suffix + $``; their string depth counts the terminator.
    """

    def __init__(self, parent, depth, sa_lo, sa_hi, edge_start, child_ptr, child_ids,
                 child_codes, leaf_of_sa):
        self.parent = parent
        self.depth = depth
        self.sa_lo = sa_lo
        self.sa_hi = sa_hi
        self.edge_start = edge_start
        self.child_ptr = child_ptr
        self.child_ids = child_ids
        self.child_codes = child_codes
        self.leaf_of_sa = leaf_of_sa

    @property
    def num_nodes(self) -> int:
        return len(self.depth)

    def is_leaf(self, v: int) -> bool:
        return self.child_ptr[v] == self.child_ptr[v + 1]

    def children(self, v: int) -> list[int]:
        return list(self.child_ids[self.child_ptr[v]:self.child_ptr[v + 1]])

    def edge_span(self, v: int) -> tuple[int, int]:
        """Half-open text span of the label on the edge into ``v``."""
        if v == 0:
            return (0, 0)
        start = self.edge_start[v]
        return start, start + self.depth[v] - self.depth[self.parent[v]]

    def leaf_count(self, v: int) -> int:
        return self.sa_hi[v] - self.sa_lo[v]

    def child_by_code(self, v: int, c: int) -> Optional[ChildMatch]:
        return child_by_code(self, v, c)


def child_by_code(tree: SuffixTree, v: int, c: int) -> Optional[ChildMatch]:
    lo, hi = tree.child_ptr[v], tree.child_ptr[v + 1]
    k = bisect_right(tree.child_codes, c, lo, hi)
    if k == lo:
        return None
    k -= 1
    return ChildMatch(tree.child_ids[k], tree.child_codes[k] == c)


def build_suffix_tree(ix: SuffixArrayIndex, t: PackedText) -> SuffixTree:
    n = ix.n
    sa, lcp = ix.sa, ix.lcp
    parent = array("q", [-1])
    depth = array("q", [0])
    lo = array("q", [0])
    hi = array("q", [n])
    leaf_old = array("q", bytes(8 * n))
    stack = [0]

    def close(h: int, i: int) -> None:
        while depth[stack[-1]] > h:
            last = stack.pop()
            hi[last] = i
            top = stack[-1]
            if depth[top] >= h:
                parent[last] = top
            else:
                v = len(depth)
                depth.append(h)
                lo.append(lo[last])
                hi.append(-1)
                parent.append(-1)
                parent[last] = v
                stack.append(v)

    for i in range(n):
        if i:
            close(lcp[i], i)
        leaf = len(depth)
        depth.append(n - sa[i] + 1)
        lo.append(i)
        hi.append(i + 1)
        parent.append(-1)
        leaf_old[i] = leaf
        stack.append(leaf)
    close(0, n)

    return _finish_tree(t, sa, parent, depth, lo, hi, leaf_old)


def _to_array(a: np.ndarray) -> array:
    return array("q", np.ascontiguousarray(a, dtype=np.int64).tobytes())


def _finish_tree(t, sa, parent, depth, lo, hi, leaf_old) -> SuffixTree:
    depth_np = np.frombuffer(depth, dtype=np.int64)
    lo_np = np.frombuffer(lo, dtype=np.int64)
    order = np.lexsort((depth_np, lo_np))  # preorder: by leftmost leaf, then shallow first
    num = len(order)
    new_id = np.empty(num, dtype=np.int64)
    new_id[order] = np.arange(num, dtype=np.int64)

    par_old = np.frombuffer(parent, dtype=np.int64)[order]
    par = np.where(par_old >= 0, new_id[np.maximum(par_old, 0)], -1)
    dep = depth_np[order]
    slo = lo_np[order]
    shi = np.frombuffer(hi, dtype=np.int64)[order]
    sa_np = np.asarray(sa, dtype=np.int64)
    pdep = np.where(par >= 0, dep[np.maximum(par, 0)], 0)
    estart = np.where(par >= 0, sa_np[np.minimum(slo, len(sa_np) - 1)] + pdep, 0) if len(sa_np) else np.zeros(num, np.int64)

    kids = np.arange(1, num, dtype=np.int64)
    kid_par = par[1:]
    korder = np.argsort(kid_par, kind="stable")
    child_ids = kids[korder]
    counts = np.bincount(kid_par, minlength=num)
    child_ptr = np.zeros(num + 1, dtype=np.int64)
    np.cumsum(counts, out=child_ptr[1:])
    codes = t.codes_array()
    child_codes = codes[estart[child_ids]] if len(child_ids) else np.zeros(0, np.int64)
    leaf_of_sa = new_id[np.frombuffer(leaf_old, dtype=np.int64)]

    return SuffixTree(
        parent=_to_array(par), depth=_to_array(dep), sa_lo=_to_array(slo),
        sa_hi=_to_array(shi), edge_start=_to_array(estart), child_ptr=_to_array(child_ptr),
        child_ids=_to_array(child_ids), child_codes=_to_array(child_codes),
        leaf_of_sa=_to_array(leaf_of_sa),
    )


def tree_from_arrays(t: PackedText, parent, depth, sa_lo, sa_hi, edge_start, child_ptr,
                     child_ids, leaf_of_sa) -> SuffixTree:
    codes = t.codes_array()
    cid = np.asarray(child_ids, dtype=np.int64)
    es = np.asarray(edge_start, dtype=np.int64)
    ok = (cid >= 0) & (cid < len(es))
    starts = np.where(ok, es[np.where(ok, cid, 0)], 0)
    starts = np.clip(starts, 0, len(codes) - 1)
    child_codes = codes[starts] if len(cid) else np.zeros(0, np.int64)
    return SuffixTree(*(_to_array(np.asarray(a, dtype=np.int64)) for a in (
        parent, depth, sa_lo, sa_hi, edge_start, child_ptr, child_ids)),
        child_codes=_to_array(child_codes), leaf_of_sa=_to_array(np.asarray(leaf_of_sa)))
