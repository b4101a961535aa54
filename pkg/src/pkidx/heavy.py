"""Heavy-node classification and micro-tree decomposition of the suffix tree.

A node is heavy when its subtree spans at least ``t`` leaves.  The heavy
nodes form a subtree which is cut into micro trees at string depths that are
multiples of alpha.  Boundary points that fall inside an edge are promoted to
node ids ``>= tree.num_nodes``; a promoted id stands for the point at a given
string depth on the edge into its ``lower`` tree node.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Optional

import numpy as np

from .containers import DetDictionary, DetPredecessor
from .packed import PackedText, chunk_word, key_from_chunk
from .suffix import SuffixArrayIndex, SuffixTree


class MicroKind(IntEnum):
    TYPE1 = 1   # holds a heavy branching node; navigated by hashing
    TYPE2A = 2  # a heavy path with at least one heavy node inside
    TYPE2B = 3  # a stretch of a single heavy edge; skips to the next heavy node


def heavy_threshold(n: int) -> int:
    if n < 4:
        return 2
    x = math.log2(math.log2(n)) ** 2
    return max(2, math.ceil(x - 1e-9))


@dataclass
class HeavyClassification:
    threshold: int
    heavy: np.ndarray
    heavy_children: np.ndarray

    @property
    def heavy_leaf(self) -> np.ndarray:
        return self.heavy & (self.heavy_children == 0)

    @property
    def heavy_branching(self) -> np.ndarray:
        return self.heavy & (self.heavy_children >= 2)

    def counts(self) -> dict:
        return {
            "heavy": int(self.heavy.sum()),
            "heavy_leaf": int(self.heavy_leaf.sum()),
            "heavy_branching": int(self.heavy_branching.sum()),
        }


def classify_heavy(tree: SuffixTree, n: int, threshold: Optional[int] = None) -> HeavyClassification:
    t = heavy_threshold(n) if threshold is None else threshold
    if t < 2:
        raise ValueError("threshold must be at least 2")
    span = np.frombuffer(tree.sa_hi, dtype=np.int64) - np.frombuffer(tree.sa_lo, dtype=np.int64)
    heavy = span >= t
    parent = np.frombuffer(tree.parent, dtype=np.int64)
    sel = heavy.copy()
    sel[0] = False
    hc = np.bincount(parent[sel], minlength=tree.num_nodes)
    return HeavyClassification(t, heavy, hc)


@dataclass
class MicroTree:
    index: int
    root: int
    depth: int
    kind: MicroKind
    leaves: list = field(default_factory=list)  # micro-leaf node ids at depth + alpha
    nav: Optional[DetDictionary] = None
    next_micro: int = -1
    path_word: int = 0
    skip_start: int = 0
    skip_len: int = 0
    light_pred: DetPredecessor = field(default_factory=DetPredecessor)
    heavy_pred: DetPredecessor = field(default_factory=DetPredecessor)


@dataclass
class PromotionLedger:
    type1: int = 0
    type2a: int = 0
    type2b: int = 0
    total: int = 0

    def as_dict(self) -> dict:
        return {"type1": self.type1, "type2a": self.type2a, "type2b": self.type2b,
                "total": self.total}


class HeavyIndex:
    def __init__(self, tree: SuffixTree, alpha: int, bits: int, hc: HeavyClassification,
                 micro: list, promoted_lower: list, promoted_depth: list,
                 ledger: PromotionLedger):
        self.tree = tree
        self.alpha = alpha
        self.bits = bits
        self.classification = hc
        self.micro = micro
        self.promoted_lower = promoted_lower
        self.promoted_depth = promoted_depth
        self.ledger = ledger
        self.base = tree.num_nodes

    @property
    def threshold(self) -> int:
        return self.classification.threshold

    def lower(self, v: int) -> int:
        return v if v < self.base else self.promoted_lower[v - self.base]

    def node_depth(self, v: int) -> int:
        return self.tree.depth[v] if v < self.base else self.promoted_depth[v - self.base]

    def is_promoted(self, v: int) -> bool:
        return v >= self.base

    def promoted_by_lower(self) -> dict:
        """lower tree node -> [(depth, promoted id), ...]."""
        out: dict = {}
        for i, (c, d) in enumerate(zip(self.promoted_lower, self.promoted_depth)):
            out.setdefault(c, []).append((d, self.base + i))
        return out

    def kind_counts(self) -> dict:
        out = {k.name.lower(): 0 for k in MicroKind}
        for mt in self.micro:
            out[mt.kind.name.lower()] += 1
        return out


def build_heavy_index(tree: SuffixTree, ix: SuffixArrayIndex, text: PackedText,
                      threshold: Optional[int] = None) -> HeavyIndex:
    alpha, bits = text.alphabet.alpha, text.alphabet.bits
    hc = classify_heavy(tree, text.length, threshold)
    base = tree.num_nodes
    micro: list[MicroTree] = []
    plower: list[int] = []
    pdepth: list[int] = []
    ledger = PromotionLedger()
    if base == 0 or not hc.heavy[0]:
        return HeavyIndex(tree, alpha, bits, hc, micro, plower, pdepth, ledger)

    heavy = hc.heavy.tolist()
    hch = hc.heavy_children.tolist()
    depth, sa_lo = tree.depth, tree.sa_lo
    cptr, cids = tree.child_ptr, tree.child_ids
    sa = ix.sa
    tw = text.words
    points: dict[tuple[int, int], int] = {}

    def point(c: int, d: int) -> int:
        if depth[c] == d:
            return c
        key = (c, d)
        v = points.get(key)
        if v is None:
            v = base + len(plower)
            points[key] = v
            plower.append(c)
            pdepth.append(d)
        return v

    def path_key(c: int, d0: int, length: int) -> int:
        w = chunk_word(tw, alpha, bits, sa[sa_lo[c]] + d0, length)
        return key_from_chunk(w, length, alpha, bits)

    pending: deque = deque()

    def enqueue(c: int, d: int) -> int:
        micro.append(None)
        pending.append((len(micro) - 1, c, d))
        return len(micro) - 1

    enqueue(0, 0)
    while pending:
        idx, c, d0 = pending.popleft()
        lim = d0 + alpha
        inside: list[int] = []
        exits: list[int] = []  # heavy nodes whose incoming edge crosses lim
        if depth[c] < lim:
            stack = [c]
            while stack:
                u = stack.pop()
                inside.append(u)
                for k in range(cptr[u + 1] - 1, cptr[u] - 1, -1):
                    ch = cids[k]
                    if heavy[ch]:
                        if depth[ch] < lim:
                            stack.append(ch)
                        else:
                            exits.append(ch)
        if any(hch[u] >= 2 for u in inside):
            kind = MicroKind.TYPE1
        elif inside:
            kind = MicroKind.TYPE2A
        else:
            kind = MicroKind.TYPE2B

        root = point(c, d0)
        mt = MicroTree(idx, root, d0, kind)
        promoted = int(root >= base)

        if kind is MicroKind.TYPE2B:
            target = alpha * (depth[c] // alpha)
            mt.skip_start = sa[sa_lo[c]] + d0
            mt.skip_len = target - d0
            mt.next_micro = enqueue(c, target)
        else:
            nav_pairs = []
            for ch in exits:
                leaf = point(ch, lim)
                promoted += int(leaf >= base)
                mt.leaves.append(leaf)
                nxt = enqueue(ch, lim)
                word = chunk_word(tw, alpha, bits, sa[sa_lo[ch]] + d0, alpha)
                nav_pairs.append((word, nxt))
            if kind is MicroKind.TYPE1:
                mt.nav = DetDictionary(nav_pairs)
            elif nav_pairs:
                mt.path_word, mt.next_micro = nav_pairs[0]

            light_pairs = []
            heavy_pairs = []
            if root >= base:
                heavy_pairs.append((0, root))
            for u in inside:
                heavy_pairs.append((path_key(u, d0, depth[u] - d0), u))
                for k in range(cptr[u], cptr[u + 1]):
                    ch = cids[k]
                    if not heavy[ch]:
                        ln = min(alpha, depth[ch] - d0)
                        light_pairs.append((path_key(ch, d0, ln), ch))
            mt.light_pred = DetPredecessor(light_pairs)
            mt.heavy_pred = DetPredecessor(heavy_pairs)

        if kind is MicroKind.TYPE1:
            ledger.type1 += promoted
        elif kind is MicroKind.TYPE2A:
            ledger.type2a += promoted
        else:
            ledger.type2b += promoted
        micro[idx] = mt

    ledger.total = len(plower)
    return HeavyIndex(tree, alpha, bits, hc, micro, plower, pdepth, ledger)
