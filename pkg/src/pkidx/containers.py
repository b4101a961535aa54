"""Static deterministic containers keyed by 64-bit words.

``DetDictionary`` is a two-level perfect hash (FKS layout).  Hash functions
are multiply-shift; multipliers are drawn from a fixed splitmix64 stream, so
the same input always yields the same tables.

``DetPredecessor`` splits keys on their high half: a ``DetDictionary`` maps
each present high half to its block of the sorted key array, and the block is
searched for the low half.  A high half that is absent falls back to a binary
search over the distinct high halves.
"""

from __future__ import annotations

from array import array
from bisect import bisect_right
from typing import Iterable, Iterator, Optional

from .packed import WORD_BITS, WORD_MASK

_SEED = 0x9E3779B97F4A7C15
MAX_TRIES = 10_000


class DuplicateKey(ValueError):
    pass


def _multipliers(salt: int) -> Iterator[int]:
    """Deterministic odd 64-bit multipliers (splitmix64)."""
    state = (_SEED * (salt + 1)) & WORD_MASK
    while True:
        state = (state + 0x9E3779B97F4A7C15) & WORD_MASK
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & WORD_MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & WORD_MASK
        yield (z ^ (z >> 31)) | 1


def _hash(a: int, key: int, bits: int) -> int:
    return ((a * key) & WORD_MASK) >> (WORD_BITS - bits)


def _check_pairs(pairs: list[tuple[int, int]]) -> None:
    seen = set()
    for k, _ in pairs:
        if not 0 <= k <= WORD_MASK:
            raise ValueError(f"key {k} does not fit a {WORD_BITS}-bit word")
        if k in seen:
            raise DuplicateKey(f"duplicate key {k:#x}")
        seen.add(k)


class DetDictionary:
    __slots__ = ("size", "top_bits", "top_mult", "sub_off", "sub_bits", "sub_mult",
                 "slot_keys", "slot_vals", "_pairs")

    def __init__(self, pairs: Iterable[tuple[int, int]] = ()):
        pairs = [(int(k), int(v)) for k, v in pairs]
        _check_pairs(pairs)
        self._pairs = sorted(pairs)
        k = len(pairs)
        self.size = k
        self.top_bits = max(1, (k - 1).bit_length()) if k else 0
        self.top_mult = 1
        self.sub_off = array("q")
        self.sub_bits = array("q")
        self.sub_mult = array("Q")
        self.slot_keys = array("Q")
        self.slot_vals = array("q")
        if not k:
            return

        nb = 1 << self.top_bits
        for tries, a in enumerate(_multipliers(0)):
            buckets: list[list[tuple[int, int]]] = [[] for _ in range(nb)]
            for key, val in pairs:
                buckets[_hash(a, key, self.top_bits)].append((key, val))
            if sum(len(b) * len(b) for b in buckets) <= 4 * k:
                self.top_mult = a
                break
            if tries >= MAX_TRIES:
                raise RuntimeError("no top-level multiplier found")

        off = 0
        for bi, bucket in enumerate(buckets):
            c = len(bucket)
            self.sub_off.append(off)
            if c <= 1:
                self.sub_bits.append(0)
                self.sub_mult.append(1)
                if c:
                    self.slot_keys.append(bucket[0][0])
                    self.slot_vals.append(bucket[0][1])
                    off += 1
                continue
            sbits = (2 * c * c - 1).bit_length()
            size = 1 << sbits
            for tries, a in enumerate(_multipliers(bi + 1)):
                slots = [-1] * size
                ok = True
                for key, _ in bucket:
                    h = _hash(a, key, sbits)
                    if slots[h] != -1:
                        ok = False
                        break
                    slots[h] = key
                if ok:
                    break
                if tries >= MAX_TRIES:
                    raise RuntimeError("no bucket multiplier found")
            self.sub_bits.append(sbits)
            self.sub_mult.append(a)
            keys = [0] * size
            vals = [-1] * size
            for key, val in bucket:
                h = _hash(a, key, sbits)
                keys[h] = key
                vals[h] = val
            self.slot_keys.extend(keys)
            self.slot_vals.extend(vals)
            off += size

    def __len__(self) -> int:
        return self.size

    def lookup(self, key: int) -> Optional[int]:
        if not self.size:
            return None
        b = ((self.top_mult * key) & WORD_MASK) >> (WORD_BITS - self.top_bits)
        s = self.sub_bits[b]
        idx = self.sub_off[b] + (((self.sub_mult[b] * key) & WORD_MASK) >> (WORD_BITS - s))
        if idx < len(self.slot_keys) and self.slot_keys[idx] == key and self.slot_vals[idx] != -1:
            return self.slot_vals[idx]
        return None

    def pairs(self) -> list[tuple[int, int]]:
        return list(self._pairs)

    def space(self) -> int:
        return len(self.slot_keys) + 3 * len(self.sub_off)


class DetPredecessor:
    __slots__ = ("keys", "vals", "highs", "group_start", "top", "shift")

    def __init__(self, pairs: Iterable[tuple[int, int]] = (), shift: int = WORD_BITS // 2):
        pairs = [(int(k), int(v)) for k, v in pairs]
        _check_pairs(pairs)
        pairs.sort()
        self.shift = shift
        self.keys = array("Q", [k for k, _ in pairs])
        self.vals = array("q", [v for _, v in pairs])
        highs: list[int] = []
        starts: list[int] = []
        for i, (k, _) in enumerate(pairs):
            h = k >> shift
            if not highs or highs[-1] != h:
                highs.append(h)
                starts.append(i)
        starts.append(len(pairs))
        self.highs = array("Q", highs)
        self.group_start = array("q", starts)
        self.top = DetDictionary((h, g) for g, h in enumerate(highs))

    def __len__(self) -> int:
        return len(self.keys)

    def _pred_index(self, q: int) -> int:
        g = self.top.lookup(q >> self.shift)
        if g is not None:
            start = self.group_start[g]
            i = bisect_right(self.keys, q, start, self.group_start[g + 1])
            return i - 1  # start - 1 is the previous group's maximum
        j = bisect_right(self.highs, q >> self.shift)
        return self.group_start[j] - 1

    def predecessor(self, q: int) -> Optional[tuple[int, int]]:
        """Largest (key, payload) with key <= q."""
        i = self._pred_index(q)
        if i < 0:
            return None
        return self.keys[i], self.vals[i]

    def successor(self, q: int) -> Optional[tuple[int, int]]:
        """Smallest (key, payload) with key > q."""
        i = self._pred_index(q) + 1
        if i >= len(self.keys):
            return None
        return self.keys[i], self.vals[i]

    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.keys, self.vals))


def dict_build(pairs: Iterable[tuple[int, int]]) -> DetDictionary:
    return DetDictionary(pairs)


def dict_lookup(d: DetDictionary, key: int) -> Optional[int]:
    return d.lookup(key)


def pred_build(pairs: Iterable[tuple[int, int]]) -> DetPredecessor:
    return DetPredecessor(pairs)


def pred_query(p: DetPredecessor, q: int) -> Optional[tuple[int, int]]:
    return p.predecessor(q)
