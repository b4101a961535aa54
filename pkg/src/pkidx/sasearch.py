"""Word-accelerated Manber-Myers search over a suffix array.

Pattern and suffixes are compared alpha codes at a time: both sides are
aligned into a word, XORed, and the lowest set bit names the first
mismatching code.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

from .packed import PackedText, chunk_word
from .suffix import SuffixArrayIndex


class AlphabetMismatch(ValueError):
    pass


@dataclass
class SearchStats:
    chunk_comparisons: int = 0
    iterations: int = 0


class SearchOutcome(NamedTuple):
    pred_rank: Optional[int]
    lo: int
    hi: int

    @property
    def count(self) -> int:
        return self.hi - self.lo


class _Comparer:
    """Compares the pattern against text suffixes from a given offset."""

    __slots__ = ("pw", "tw", "alpha", "bits", "mask", "m", "exhausted_greater", "stats")

    def __init__(self, t: PackedText, p: PackedText, exhausted_greater: bool, stats: SearchStats):
        if p.alphabet != t.alphabet:
            raise AlphabetMismatch("pattern and text use different alphabets")
        self.pw = p.words
        self.tw = t.words
        self.alpha = t.alphabet.alpha
        self.bits = t.alphabet.bits
        self.mask = (1 << self.bits) - 1
        self.m = p.length
        self.exhausted_greater = exhausted_greater
        self.stats = stats

    def __call__(self, pos: int, start: int) -> tuple[int, bool]:
        """Return (lcp of pattern and suffix ``pos``, pattern > suffix) scanning from ``start``."""
        alpha, bits, m = self.alpha, self.bits, self.m
        pw, tw = self.pw, self.tw
        stats = self.stats
        k = start
        while k < m:
            ln = m - k
            if ln > alpha:
                ln = alpha
            a = chunk_word(pw, alpha, bits, k, ln)
            b = chunk_word(tw, alpha, bits, pos + k, ln)
            stats.chunk_comparisons += 1
            x = a ^ b
            if x:
                j = ((x & -x).bit_length() - 1) // bits
                sh = j * bits
                return k + j, ((a >> sh) & self.mask) > ((b >> sh) & self.mask)
            k += ln
        return m, self.exhausted_greater


def _boundary(ix: SuffixArrayIndex, cmp: _Comparer, lo0: int, hi0: int, known: int,
              check: bool = False) -> int:
    """First rank in [lo0, hi0) whose suffix is greater than the pattern, else hi0."""
    if lo0 >= hi0:
        return lo0
    sa = ix.sa
    stats = cmp.stats
    L, R = lo0, hi0 - 1
    l, gt = cmp(sa[L], known)
    if not gt:
        return L
    if R == L:
        return hi0
    h = ix.lcp_query(L, R)
    if l > h:
        r = h
    elif l < h:
        return hi0
    else:
        r, gt = cmp(sa[R], l)
        if gt:
            return hi0
    while R - L > 1:
        stats.iterations += 1
        if check:
            _check_invariant(ix, cmp, L, R, l, r)
        M = (L + R) >> 1
        if l > r:
            h = ix.lcp_query(L, M)
            if h > l:
                L = M
                continue
            if h < l:
                R, r = M, h
                continue
            j, gt = cmp(sa[M], l)
        elif r > l:
            h = ix.lcp_query(M, R)
            if h > r:
                R = M
                continue
            if h < r:
                L, l = M, h
                continue
            j, gt = cmp(sa[M], r)
        else:
            j, gt = cmp(sa[M], l)
        if gt:
            L, l = M, j
        else:
            R, r = M, j
    return R


def _check_invariant(ix, cmp: _Comparer, L: int, R: int, l: int, r: int) -> None:
    scratch = _Comparer.__new__(_Comparer)
    for name in _Comparer.__slots__:
        setattr(scratch, name, getattr(cmp, name))
    scratch.stats = SearchStats()
    assert scratch(ix.sa[L], 0)[0] == l, "left boundary lcp drifted"
    assert scratch(ix.sa[R], 0)[0] == r, "right boundary lcp drifted"


def packed_predecessor_search(ix: SuffixArrayIndex, t: PackedText, p: PackedText,
                              lo0: int = 0, hi0: Optional[int] = None, *,
                              stats: Optional[SearchStats] = None, known_lcp: int = 0,
                              check: bool = False) -> Optional[int]:
    """Rank of the largest suffix in [lo0, hi0) smaller than ``p``, or None.

    ``known_lcp`` is a prefix length every suffix in the range is known to share with ``p``.
    """
    if hi0 is None:
        hi0 = ix.n
    if p.length == 0:
        raise ValueError("empty pattern")
    stats = stats if stats is not None else SearchStats()
    cmp = _Comparer(t, p, False, stats)
    b = _boundary(ix, cmp, lo0, hi0, known_lcp, check)
    return b - 1 if b > lo0 else None


def packed_range_search(ix: SuffixArrayIndex, t: PackedText, p: PackedText,
                        lo0: int = 0, hi0: Optional[int] = None, *,
                        stats: Optional[SearchStats] = None, known_lcp: int = 0,
                        check: bool = False) -> SearchOutcome:
    """Maximal rank range in [lo0, hi0) of suffixes prefixed by ``p``.

    Two boundary searches: the second treats pattern exhaustion as greater-than,
    i.e. searches for ``p`` followed by a symbol above every code.
    """
    if hi0 is None:
        hi0 = ix.n
    if p.length == 0:
        raise ValueError("empty pattern")
    stats = stats if stats is not None else SearchStats()
    lo = _boundary(ix, _Comparer(t, p, False, stats), lo0, hi0, known_lcp, check)
    hi = _boundary(ix, _Comparer(t, p, True, stats), lo, hi0, known_lcp, check)
    return SearchOutcome(lo - 1 if lo > lo0 else None, lo, hi)


def upper_boundary(ix: SuffixArrayIndex, t: PackedText, p: PackedText,
                   stats: Optional[SearchStats] = None) -> int:
    """First rank whose suffix is neither below ``p`` nor prefixed by it."""
    stats = stats if stats is not None else SearchStats()
    return _boundary(ix, _Comparer(t, p, True, stats), 0, ix.n, 0)


def comparison_envelope(m: int, n: int, alpha: int) -> int:
    """Chunk-comparison budget accepted for one range search."""
    return 2 * -(-m // alpha) + 4 * max(0, (n - 1).bit_length()) + 8
