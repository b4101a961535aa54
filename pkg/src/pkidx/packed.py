"""Bit-packed code sequences and the word-level primitives built on them.

Codes are stored little-index-first: position ``i`` of a word occupies bits
``[i*b, (i+1)*b)``.  Code 0 is the terminator ``$`` and sorts below every
input symbol.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

WORD_BITS = 64
WORD_MASK = (1 << WORD_BITS) - 1


class PackingError(ValueError):
    pass


@dataclass(frozen=True)
class Alphabet:
    symbols: bytes
    symbol_to_code: dict = field(repr=False, compare=False)
    sigma: int
    bits_per_symbol: int
    chars_per_word: int

    @property
    def bits(self) -> int:
        return self.bits_per_symbol

    @property
    def alpha(self) -> int:
        return self.chars_per_word

    @classmethod
    def from_symbols(cls, symbols: bytes, word_bits: int = WORD_BITS) -> "Alphabet":
        symbols = bytes(sorted(set(symbols)))
        if not symbols:
            raise PackingError("empty text")
        sigma = len(symbols)
        bits = sigma.bit_length()  # ceil(log2(sigma + 1))
        alpha = word_bits // bits
        if alpha < 1:
            raise PackingError(f"alphabet of size {sigma} does not fit a {word_bits}-bit word")
        mapping = {s: i + 1 for i, s in enumerate(symbols)}
        return cls(symbols, mapping, sigma, bits, alpha)

    def code_lut(self) -> np.ndarray:
        """256-entry lookup table, -1 for bytes outside the alphabet."""
        lut = np.full(256, -1, dtype=np.int64)
        for s, c in self.symbol_to_code.items():
            lut[s] = c
        return lut

    def encode(self, raw: bytes) -> list[int]:
        get = self.symbol_to_code.get
        out = []
        for i, s in enumerate(raw):
            c = get(s)
            if c is None:
                raise PackingError(f"byte {s!r} at position {i} is not in the alphabet")
            out.append(c)
        return out

    def decode(self, codes: Sequence[int]) -> bytes:
        return bytes(self.symbols[c - 1] for c in codes)


def build_alphabet(raw: bytes, word_bits: int = WORD_BITS) -> Alphabet:
    if not raw:
        raise PackingError("empty text")
    return Alphabet.from_symbols(bytes(raw), word_bits)


class Chunk(NamedTuple):
    word: int
    valid_len: int
    bits: int

    def codes(self, count: Optional[int] = None) -> list[int]:
        mask = (1 << self.bits) - 1
        k = self.valid_len if count is None else count
        return [(self.word >> (i * self.bits)) & mask for i in range(k)]


@dataclass(frozen=True)
class PackedText:
    words: array  # typecode 'Q'
    length: int
    alphabet: Alphabet

    @property
    def n(self) -> int:
        return self.length

    def __len__(self) -> int:
        return self.length

    def char_at(self, i: int) -> int:
        return char_at(self, i)

    def extract_chunk(self, i: int, length: int) -> Chunk:
        return extract_chunk(self, i, length)

    def codes(self) -> list[int]:
        return [char_at(self, i) for i in range(self.length)]

    def codes_array(self) -> np.ndarray:
        """Codes of positions 0..n (terminator included) as an int64 array."""
        b, a = self.alphabet.bits, self.alphabet.alpha
        w = np.frombuffer(self.words.tobytes(), dtype=np.uint64)
        shifts = (np.arange(a, dtype=np.uint64) * np.uint64(b))
        grid = (w[:, None] >> shifts[None, :]) & np.uint64((1 << b) - 1)
        return grid.reshape(-1)[: self.length + 1].astype(np.int64)

    def to_bytes(self) -> bytes:
        return self.alphabet.decode(self.codes())


def pack_codes(codes: Sequence[int] | np.ndarray, alphabet: Alphabet) -> PackedText:
    """Pack already-coded symbols; a terminator code 0 is appended."""
    b, a = alphabet.bits, alphabet.alpha
    c = np.asarray(codes, dtype=np.uint64)
    n = len(c)
    if n and (c.min() < 1 or c.max() > alphabet.sigma):
        raise PackingError("codes out of range")
    nwords = n // a + 1  # room for the terminator at position n
    grid = np.zeros(nwords * a, dtype=np.uint64)
    grid[:n] = c
    grid = grid.reshape(nwords, a)
    shifts = np.arange(a, dtype=np.uint64) * np.uint64(b)
    words = np.bitwise_or.reduce(grid << shifts[None, :], axis=1)
    return PackedText(array("Q", words.astype("<u8").tobytes()), n, alphabet)


def pack(raw: bytes, alphabet: Alphabet) -> PackedText:
    raw = bytes(raw)
    lut = alphabet.code_lut()
    codes = lut[np.frombuffer(raw, dtype=np.uint8)] if raw else np.zeros(0, dtype=np.int64)
    bad = np.flatnonzero(codes < 0)
    if len(bad):
        pos = int(bad[0])
        raise PackingError(f"byte {raw[pos]!r} at position {pos} is not in the alphabet")
    return pack_codes(codes, alphabet)


def char_at(t: PackedText, i: int) -> int:
    if i < 0 or i > t.length:
        raise IndexError(f"position {i} out of range 0..{t.length}")
    a, b = t.alphabet.alpha, t.alphabet.bits
    q, r = divmod(i, a)
    return (t.words[q] >> (r * b)) & ((1 << b) - 1)


def chunk_word(words: array, alpha: int, bits: int, i: int, k: int) -> int:
    """Codes i..i+k-1 (k <= alpha) aligned to bit 0; positions past the array read as 0."""
    q, r = divmod(i, alpha)
    nw = len(words)
    if q >= nw:
        return 0
    w = words[q] >> (r * bits)
    if r + k > alpha and q + 1 < nw:
        w |= words[q + 1] << ((alpha - r) * bits)
    return w & ((1 << (k * bits)) - 1)


def extract_chunk(t: PackedText, i: int, length: int) -> Chunk:
    a, b = t.alphabet.alpha, t.alphabet.bits
    if length > a:
        raise ValueError(f"chunk length {length} exceeds {a} codes per word")
    if length <= 0:
        return Chunk(0, 0, b)
    valid = max(0, min(length, t.length + 1 - i))
    return Chunk(chunk_word(t.words, a, b, i, length), valid, b)


def lowest_set_bit(x: int) -> int:
    return (x & -x).bit_length() - 1


def first_mismatch(a: Chunk, b: Chunk) -> Optional[int]:
    x = a.word ^ b.word
    if not x:
        return None
    return lowest_set_bit(x) // a.bits


def chunk_compare(a: Chunk, b: Chunk) -> tuple[int, Optional[int]]:
    """Return (-1 | 0 | 1, first mismatch position) for a against b."""
    p = first_mismatch(a, b)
    if p is None:
        return 0, None
    mask = (1 << a.bits) - 1
    ca = (a.word >> (p * a.bits)) & mask
    cb = (b.word >> (p * a.bits)) & mask
    return (-1 if ca < cb else 1), p


def compare_run(aw: array, a_off: int, bw: array, b_off: int, length: int,
                alpha: int, bits: int) -> tuple[int, int]:
    """Compare ``length`` codes of two packed arrays chunk by chunk.

    Returns (matched prefix length, sign) with sign 0 when all codes agree,
    otherwise -1/1 for a below/above b at the first mismatch.
    """
    k = 0
    mask = (1 << bits) - 1
    while k < length:
        ln = length - k
        if ln > alpha:
            ln = alpha
        a = chunk_word(aw, alpha, bits, a_off + k, ln)
        b = chunk_word(bw, alpha, bits, b_off + k, ln)
        x = a ^ b
        if x:
            j = ((x & -x).bit_length() - 1) // bits
            sh = j * bits
            return k + j, (1 if ((a >> sh) & mask) > ((b >> sh) & mask) else -1)
        k += ln
    return length, 0


def key_from_chunk(word: int, length: int, alpha: int, bits: int) -> int:
    """Re-lay a little-index-first chunk as a big-digit-first, $-padded key."""
    mask = (1 << bits) - 1
    key = 0
    for i in range(length):
        key = (key << bits) | ((word >> (i * bits)) & mask)
    return key << (bits * (alpha - length))


def encode_key(codes: Sequence[int], alpha: int, bits: int) -> int:
    """Word whose integer order is the lexicographic order of the $-padded codes."""
    if len(codes) > alpha:
        raise ValueError(f"key of {len(codes)} codes exceeds {alpha} codes per word")
    key = 0
    for c in codes:
        key = (key << bits) | c
    return key << (bits * (alpha - len(codes)))


def key_prefix(key: int, length: int, alpha: int, bits: int) -> int:
    """Keep the first ``length`` codes of a key, padding the rest with $."""
    drop = bits * (alpha - length)
    return (key >> drop) << drop


def key_lcp(a: int, b: int, alpha: int, bits: int) -> int:
    """Number of leading codes two keys share."""
    x = a ^ b
    if not x:
        return alpha
    return (alpha * bits - x.bit_length()) // bits
