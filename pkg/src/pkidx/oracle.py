"""Brute-force reference answers.

Nothing here touches the packed structures' search code: matching is done on
raw bytes and code lists, so the results can be used to check the index.
"""

from __future__ import annotations

from bisect import bisect_left
from typing import Optional, Sequence


SORT_LIMIT = 20000  # above this, predecessor scans instead of sorting all suffixes


def _suffix_greater(t: bytes, i: int, j: int, start: int) -> bool:
    """t[i:] > t[j:], given the first ``start`` bytes agree."""
    k = start
    while True:
        a = t[i + k:i + k + 256]
        b = t[j + k:j + k + 256]
        if a != b or not a:
            return a > b
        k += 256


class NaiveIndex:
    def __init__(self, text: bytes):
        self.text = bytes(text)
        self._sorted: Optional[list[int]] = None
        self._suffixes: Optional[list[bytes]] = None

    def _ensure_sorted(self) -> None:
        if self._sorted is None:
            t = self.text
            order = sorted(range(len(t)), key=lambda i: t[i:])
            self._sorted = order
            self._suffixes = [t[i:] for i in order]

    @property
    def suffix_array(self) -> list[int]:
        self._ensure_sorted()
        return list(self._sorted)

    def count(self, p: bytes) -> int:
        return len(self.locate(p))

    def locate(self, p: bytes) -> list[int]:
        """Every start position of ``p``, ascending."""
        t = self.text
        if not p:
            return list(range(len(t)))
        out = []
        i = t.find(p)
        while i != -1:
            out.append(i)
            i = t.find(p, i + 1)
        return out

    def predecessor(self, p: bytes) -> Optional[int]:
        """Start of the largest suffix below ``p``.

        Suffixes end with a terminator below every byte and patterns do not, so
        ``suffix + $ < p`` exactly when ``suffix < p`` as plain bytes.
        """
        if not p:
            return None
        if len(self.text) > SORT_LIMIT:
            return scan_predecessor(self.text, p)
        self._ensure_sorted()
        k = bisect_left(self._suffixes, p)
        return self._sorted[k - 1] if k else None


def scan_predecessor(t: bytes, p: bytes) -> Optional[int]:
    """Predecessor by one pass over the suffixes; only m-byte prefixes are copied."""
    m = len(p)
    best, best_key = None, b""
    for i in range(len(t)):
        s = t[i:i + m]
        if s < p:
            if best is None or s > best_key:
                best, best_key = i, s
            elif s == best_key and _suffix_greater(t, i, best, m):
                best = i
    return best


def naive_count(text: bytes, p: bytes) -> int:
    return NaiveIndex(text).count(p)


def naive_locate(text: bytes, p: bytes) -> list[int]:
    return NaiveIndex(text).locate(p)


def naive_predecessor(text: bytes, p: bytes) -> Optional[int]:
    """Linear scan over every suffix; no sorting shortcut."""
    best = None
    for i in range(len(text)):
        s = text[i:]
        if s < p and (best is None or s > text[best:]):
            best = i
    return best


def naive_suffix_array(codes: Sequence[int]) -> list[int]:
    c = list(codes)
    return sorted(range(len(c)), key=lambda i: c[i:])


def naive_lcp(codes: Sequence[int], i: int, j: int) -> int:
    n = len(codes)
    k = 0
    while i + k < n and j + k < n and codes[i + k] == codes[j + k]:
        k += 1
    return k


def naive_deepest_prefix_node(tree, codes: Sequence[int], p: Sequence[int],
                              promoted: Optional[dict] = None) -> int:
    """Walk the tree one character at a time.

    ``codes`` are the text codes including the terminator.  With ``promoted``
    (mapping lower node -> [(depth, id), ...]), points promoted inside edges
    count as nodes too.
    """
    v, d = 0, 0
    m = len(p)
    while d < m:
        nxt = None
        for k in range(tree.child_ptr[v], tree.child_ptr[v + 1]):
            ch = tree.child_ids[k]
            if codes[tree.edge_start[ch]] == p[d]:
                nxt = ch
                break
        if nxt is None:
            break
        start = tree.edge_start[nxt]
        end_depth = tree.depth[nxt]
        j = d
        while j < end_depth and j < m and codes[start + j - d] == p[j]:
            j += 1
        if j == end_depth:
            v, d = nxt, end_depth
            continue
        if promoted:
            best = None
            for pd, pid in promoted.get(nxt, ()):
                if d < pd <= j and (best is None or pd > best[0]):
                    best = (pd, pid)
            if best is not None:
                return best[1]
        break
    return v
