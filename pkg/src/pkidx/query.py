"""Count / Locate / Predecessor over the packed index.

Patterns of length at most the short-table bound are answered from the
table; longer ones descend the micro trees alpha codes at a time and finish
either with a suffix-array search inside a light subtree or at the deepest
heavy node found with three predecessor queries.
"""

from __future__ import annotations

import logging
from array import array
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .heavy import HeavyIndex, MicroKind, build_heavy_index
from .packed import (
    Alphabet, PackedText, build_alphabet, chunk_word, compare_run, key_from_chunk, key_lcp,
    key_prefix, pack, pack_codes,
)
from .sasearch import SearchStats, packed_range_search, upper_boundary
from .short_table import ShortPatternTable, build_short_table
from .suffix import (
    SuffixArrayIndex, SuffixTree, build_suffix_array, build_suffix_tree, child_by_code,
)

log = logging.getLogger(__name__)


class Answer(NamedTuple):
    """Half-open suffix-array range of the matches plus the predecessor rank."""
    lo: int
    hi: int
    pred_rank: Optional[int]

    @property
    def count(self) -> int:
        return self.hi - self.lo


@dataclass
class QueryTrace:
    path: str = ""
    micro_steps: int = 0
    stop_kind: Optional[MicroKind] = None
    light_hit: bool = False
    heavy_queries: int = 0
    dp: Optional[int] = None
    dp_depth: Optional[int] = None
    sa_stats: SearchStats = field(default_factory=SearchStats)

    def lines(self) -> list[str]:
        kind = self.stop_kind.name.lower() if self.stop_kind is not None else "-"
        return [
            f"path={self.path} micro_steps={self.micro_steps} stop={kind} "
            f"light={int(self.light_hit)} heavy_queries={self.heavy_queries} "
            f"dp={'-' if self.dp is None else self.dp} dp_depth={'-' if self.dp_depth is None else self.dp_depth}",
            f"sa_chunk_comparisons={self.sa_stats.chunk_comparisons} "
            f"sa_iterations={self.sa_stats.iterations}",
        ]


def _pack_small(codes: list[int], alphabet: Alphabet) -> PackedText:
    if len(codes) > 256:
        return pack_codes(codes, alphabet)
    a, b = alphabet.alpha, alphabet.bits
    words = array("Q")
    w = 0
    for i, c in enumerate(codes):
        r = i % a
        if r == 0 and i:
            words.append(w)
            w = 0
        w |= c << (r * b)
    words.append(w)
    if len(codes) % a == 0 and codes:
        words.append(0)  # terminator starts a new word
    return PackedText(words, len(codes), alphabet)


class PackedIndex:
    def __init__(self, text: PackedText, sa: SuffixArrayIndex, tree: SuffixTree,
                 short: ShortPatternTable, heavy: HeavyIndex):
        self.text = text
        self.sa = sa
        self.tree = tree
        self.short = short
        self.heavy = heavy
        self.alphabet = text.alphabet

    @classmethod
    def build(cls, raw: bytes, threshold: Optional[int] = None) -> "PackedIndex":
        alphabet = build_alphabet(raw)
        text = pack(raw, alphabet)
        log.debug("packed n=%d sigma=%d alpha=%d", text.length, alphabet.sigma, alphabet.alpha)
        sa = build_suffix_array(text)
        tree = build_suffix_tree(sa, text)
        codes = text.codes_array().tolist()
        short = build_short_table(tree, codes, alphabet.sigma, text.length)
        heavy = build_heavy_index(tree, sa, text, threshold)
        log.debug("built tree=%d nodes micro=%d", tree.num_nodes, len(heavy.micro))
        return cls(text, sa, tree, short, heavy)

    @property
    def n(self) -> int:
        return self.text.length

    # -- parsing -------------------------------------------------------------

    def encode(self, pattern: bytes) -> Optional[list[int]]:
        get = self.alphabet.symbol_to_code.get
        out = []
        for s in pattern:
            c = get(s)
            if c is None:
                return None
            out.append(c)
        return out

    def pack_pattern(self, codes: list[int]) -> PackedText:
        return _pack_small(codes, self.alphabet)

    # -- public queries ------------------------------------------------------

    def count(self, pattern: bytes) -> int:
        codes = self.encode(pattern)
        if codes is None:
            return 0
        return self.search(codes).count

    def locate(self, pattern: bytes) -> list[int]:
        codes = self.encode(pattern)
        if codes is None:
            return []
        ans = self.search(codes)
        return list(self.sa.sa[ans.lo:ans.hi])

    def predecessor_rank(self, pattern: bytes) -> Optional[int]:
        codes = self.encode(pattern)
        if codes is not None:
            return self.search(codes).pred_rank
        # an unknown byte sits strictly between two codes; clamp it upward
        get = self.alphabet.symbol_to_code.get
        j = next(i for i, s in enumerate(pattern) if get(s) is None)
        prefix = [get(s) for s in pattern[:j]]
        below = sum(1 for s in self.alphabet.symbols if s < pattern[j])
        if below < self.alphabet.sigma:
            return self.search(prefix + [below + 1]).pred_rank
        if not prefix:
            return self.n - 1
        r = upper_boundary(self.sa, self.text, self.pack_pattern(prefix))
        return r - 1 if r > 0 else None

    def predecessor(self, pattern: bytes) -> Optional[int]:
        r = self.predecessor_rank(pattern)
        return None if r is None else self.sa.sa[r]

    def query(self, pattern: bytes, trace: Optional[QueryTrace] = None,
              force_long: bool = False) -> tuple[int, list[int], Optional[int]]:
        """(count, locations in suffix-array order, predecessor position)."""
        codes = self.encode(pattern)
        if codes is None:
            if trace is not None:
                trace.path = "absent"
            return 0, [], self.predecessor(pattern)
        ans = self.search(codes, trace=trace, force_long=force_long)
        sa = self.sa.sa
        pred = None if ans.pred_rank is None else sa[ans.pred_rank]
        return ans.count, list(sa[ans.lo:ans.hi]), pred

    # -- routing -------------------------------------------------------------

    def route(self, m: int) -> str:
        return "short" if 1 <= m <= self.short.max_len else "long"

    def search(self, codes: list[int], trace: Optional[QueryTrace] = None,
               force_long: bool = False) -> Answer:
        m = len(codes)
        if trace is None:
            trace = QueryTrace()
        if m == 0:
            trace.path = "empty"
            return Answer(0, self.n, None)
        p = self.pack_pattern(codes)
        if not force_long and self.route(m) == "short":
            trace.path = "short"
            dp = self.short.entries[self.short_index(codes)]
            trace.dp, trace.dp_depth = dp, self.tree.depth[dp]
            return self.answer_from_dp(dp, p)
        return self.long_query(p, trace)

    def short_index(self, codes: list[int]) -> int:
        sigma = self.alphabet.sigma
        v = 0
        for c in codes:
            v = v * sigma + c - 1
        return self.short.offsets[len(codes)] + v

    # -- answering from a node -----------------------------------------------

    def answer_from_dp(self, v: int, p: PackedText) -> Answer:
        """Answer given the deepest node (tree or promoted) whose string prefixes ``p``."""
        tree, hv = self.tree, self.heavy
        c = hv.lower(v)
        dv = hv.node_depth(v)
        lo, hi = tree.sa_lo[c], tree.sa_hi[c]
        m = p.length
        if m == dv:
            return Answer(lo, hi, lo - 1 if lo > 0 else None)
        alpha, bits = self.alphabet.alpha, self.alphabet.bits
        code = chunk_word(p.words, alpha, bits, dv, 1)
        sa = self.sa.sa
        if dv == tree.depth[c]:
            cm = child_by_code(tree, c, code)
            if cm is None:
                return Answer(lo, lo, lo - 1 if lo > 0 else None)
            ch, exact = cm
        else:
            ch = c
            first = chunk_word(self.text.words, alpha, bits, sa[lo] + dv, 1)
            if first > code:
                return Answer(lo, lo, lo - 1 if lo > 0 else None)
            exact = first == code
        clo, chi = tree.sa_lo[ch], tree.sa_hi[ch]
        if not exact:
            return Answer(chi, chi, chi - 1)
        end = min(m, tree.depth[ch])
        _, sign = compare_run(p.words, dv, self.text.words, sa[clo] + dv, end - dv, alpha, bits)
        if sign > 0:
            return Answer(chi, chi, chi - 1)
        if sign < 0:
            return Answer(clo, clo, clo - 1 if clo > 0 else None)
        if m > tree.depth[ch]:
            raise AssertionError(f"node {v} is not the deepest node prefixing the pattern")
        return Answer(clo, chi, clo - 1 if clo > 0 else None)

    # -- long patterns -------------------------------------------------------

    def long_query(self, p: PackedText, trace: QueryTrace) -> Answer:
        trace.path = "long"
        hv = self.heavy
        if not hv.micro:
            trace.path = "sa"
            out = packed_range_search(self.sa, self.text, p, stats=trace.sa_stats)
            return Answer(out.lo, out.hi, out.pred_rank)

        alpha, bits = self.alphabet.alpha, self.alphabet.bits
        pw, tw = p.words, self.text.words
        m = p.length
        micro = hv.micro
        mt = micro[0]
        d = 0
        while True:
            rem = m - d
            kind = mt.kind
            if kind is MicroKind.TYPE1:
                if rem >= alpha:
                    nxt = mt.nav.lookup(chunk_word(pw, alpha, bits, d, alpha))
                    if nxt is not None:
                        mt, d = micro[nxt], d + alpha
                        trace.micro_steps += 1
                        continue
            elif kind is MicroKind.TYPE2A:
                if (mt.next_micro >= 0 and rem >= alpha
                        and chunk_word(pw, alpha, bits, d, alpha) == mt.path_word):
                    mt, d = micro[mt.next_micro], d + alpha
                    trace.micro_steps += 1
                    continue
            elif rem >= mt.skip_len:
                _, sign = compare_run(pw, d, tw, mt.skip_start, mt.skip_len, alpha, bits)
                if sign == 0:
                    mt, d = micro[mt.next_micro], d + mt.skip_len
                    trace.micro_steps += 1
                    continue
            break

        trace.stop_kind = mt.kind
        rem = m - d
        if mt.kind is MicroKind.TYPE2B or rem == 0:
            trace.dp, trace.dp_depth = mt.root, d
            return self.answer_from_dp(mt.root, p)

        ln = min(alpha, rem)
        q = key_from_chunk(chunk_word(pw, alpha, bits, d, ln), ln, alpha, bits)
        tree = self.tree
        hit = mt.light_pred.predecessor(q)
        if hit is not None:
            light = hit[1]
            dl = tree.depth[light]
            if dl <= m:
                lo = tree.sa_lo[light]
                _, sign = compare_run(pw, d, tw, self.sa.sa[lo] + d, dl - d, alpha, bits)
                if sign == 0:
                    trace.light_hit = True
                    hi = tree.sa_hi[light]
                    out = packed_range_search(self.sa, self.text, p, lo, hi,
                                              stats=trace.sa_stats, known_lcp=dl)
                    pred = out.pred_rank
                    if pred is None and lo > 0:
                        pred = lo - 1
                    return Answer(out.lo, out.hi, pred)

        dp = self.resolve_dp(mt, q, trace)
        trace.dp, trace.dp_depth = dp, hv.node_depth(dp)
        return self.answer_from_dp(dp, p)

    def resolve_dp(self, mt, p0: int, trace: QueryTrace) -> int:
        """Deepest heavy node of ``mt`` prefixing the pattern, from three predecessor queries."""
        alpha, bits = self.alphabet.alpha, self.alphabet.bits
        pred = mt.heavy_pred.predecessor
        hit = pred(p0)
        trace.heavy_queries += 1
        if hit is None:
            return mt.root
        p1 = key_prefix(p0, key_lcp(p0, hit[0], alpha, bits), alpha, bits)
        hit = pred(p1)
        trace.heavy_queries += 1
        if hit is None:
            return mt.root
        p2 = key_prefix(p0, key_lcp(p0, hit[0], alpha, bits), alpha, bits)
        hit = pred(p2)
        trace.heavy_queries += 1
        return mt.root if hit is None else hit[1]


# module-level API mirroring the operation names


def count(idx: PackedIndex, pattern: bytes) -> int:
    return idx.count(pattern)


def locate(idx: PackedIndex, pattern: bytes) -> list[int]:
    return idx.locate(pattern)


def predecessor(idx: PackedIndex, pattern: bytes) -> Optional[int]:
    return idx.predecessor(pattern)
