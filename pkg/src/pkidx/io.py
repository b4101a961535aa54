"""On-disk index container.

Layout (all integers little-endian)::

    magic   8 bytes  b"PKIDX1\\0\\0"
    header  <IIIIIQQQI  version, w, sigma, b, alpha, n, t, max_short, sections
    section 4-byte tag, 1-byte type ('B' | 'q' | 'Q'), 3 pad bytes, <Q count, payload
    ...
    trailer <I crc32 of everything before it

Only primary data is stored.  Rank, the RMQ table, child codes and the hash
and predecessor containers are rebuilt on load; their construction is
deterministic so a loaded index answers exactly like the saved one.
"""

from __future__ import annotations

import struct
import zlib
from array import array
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .containers import DetDictionary, DetPredecessor
from .heavy import HeavyIndex, MicroKind, MicroTree, PromotionLedger, classify_heavy
from .packed import WORD_BITS, Alphabet, PackedText
from .query import PackedIndex
from .short_table import ShortPatternTable, _offsets, max_short_length
from .suffix import suffix_array_from_arrays, tree_from_arrays

MAGIC = b"PKIDX1\0\0"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<IIIIIQQQI")
_SECTION = struct.Struct("<4sc3xQ")
_DTYPES = {b"B": np.dtype("u1"), b"q": np.dtype("<i8"), b"Q": np.dtype("<u8")}

_TREE_FIELDS = ("parent", "depth", "sa_lo", "sa_hi", "edge_start", "child_ptr",
                "child_ids", "leaf_of_sa")
_MICRO_FIELDS = 6  # root, depth, kind, next_micro, skip_start, skip_len


class IndexFormatError(ValueError):
    pass


@dataclass
class Header:
    version: int
    word_bits: int
    sigma: int
    bits: int
    alpha: int
    n: int
    threshold: int
    max_short: int
    sections: int = 0


@dataclass
class Records:
    """FASTA bookkeeping: record names and start offsets in the concatenated text."""
    names: list[str]
    starts: list[int]

    def __len__(self) -> int:
        return len(self.names)


@dataclass
class IndexBundle:
    index: PackedIndex
    records: Optional[Records] = None
    header: Optional[Header] = None
    checksum_ok: bool = True
    warnings: list[str] = field(default_factory=list)


# -- writing -----------------------------------------------------------------


def _flatten(groups: list[list[tuple[int, int]]]) -> tuple[list[int], list[int], list[int]]:
    ptr, keys, vals = [0], [], []
    for g in groups:
        for k, v in g:
            keys.append(k)
            vals.append(v)
        ptr.append(len(keys))
    return ptr, keys, vals


def _sections(idx: PackedIndex, records: Optional[Records]) -> list[tuple[bytes, bytes, object]]:
    tree, hv = idx.tree, idx.heavy
    out: list[tuple[bytes, bytes, object]] = [
        (b"ALPH", b"B", idx.alphabet.symbols),
        (b"TEXT", b"Q", idx.text.words),
        (b"SA  ", b"q", idx.sa.sa),
        (b"LCP ", b"q", idx.sa.lcp),
    ]
    for i, name in enumerate(_TREE_FIELDS):
        out.append((f"T{i:03d}".encode(), b"q", getattr(tree, name)))
    out.append((b"SHRT", b"q", idx.short.entries))
    out.append((b"PLOW", b"q", hv.promoted_lower))
    out.append((b"PDEP", b"q", hv.promoted_depth))

    rec, pwords, leaves = [], [], []
    nav, light, heavy = [], [], []
    for mt in hv.micro:
        rec.extend((mt.root, mt.depth, int(mt.kind), mt.next_micro, mt.skip_start, mt.skip_len))
        pwords.append(mt.path_word)
        leaves.append([(v, 0) for v in mt.leaves])
        nav.append(mt.nav.pairs() if mt.nav is not None else [])
        light.append(mt.light_pred.pairs())
        heavy.append(mt.heavy_pred.pairs())
    out.append((b"MREC", b"q", rec))
    out.append((b"MPWD", b"Q", pwords))
    for tag, groups in ((b"ML", leaves), (b"NV", nav), (b"LP", light), (b"HP", heavy)):
        ptr, keys, vals = _flatten(groups)
        out.append((tag + b"PT", b"q", ptr))
        out.append((tag + b"KY", b"Q", keys))
        if tag != b"ML":
            out.append((tag + b"VL", b"q", vals))
    lg = hv.ledger
    out.append((b"LEDG", b"q", [lg.type1, lg.type2a, lg.type2b, lg.total]))
    if records is not None:
        out.append((b"FSTA", b"q", records.starts))
        out.append((b"FNAM", b"B", "\n".join(records.names).encode()))
    return out


def dumps(idx: PackedIndex, records: Optional[Records] = None) -> bytes:
    a = idx.alphabet
    sections = _sections(idx, records)
    parts = [MAGIC, _HEADER.pack(FORMAT_VERSION, WORD_BITS, a.sigma, a.bits, a.alpha, idx.n,
                                 idx.heavy.threshold, idx.short.max_len, len(sections))]
    for tag, code, data in sections:
        arr = np.frombuffer(bytes(data), dtype="u1") if code == b"B" else \
            np.asarray(data, dtype=_DTYPES[code]).reshape(-1)
        parts.append(_SECTION.pack(tag, code, len(arr)))
        parts.append(arr.astype(_DTYPES[code], copy=False).tobytes())
    body = b"".join(parts)
    return body + struct.pack("<I", zlib.crc32(body))


def save(idx: PackedIndex, path: str | Path, records: Optional[Records] = None) -> None:
    Path(path).write_bytes(dumps(idx, records))


# -- reading -----------------------------------------------------------------


def read_header(data: bytes) -> Header:
    if len(data) < len(MAGIC) + _HEADER.size or data[: len(MAGIC)] != MAGIC:
        raise IndexFormatError("not a pkidx index file (bad magic)")
    h = Header(*_HEADER.unpack_from(data, len(MAGIC)))
    if h.version != FORMAT_VERSION:
        raise IndexFormatError(f"unsupported format version {h.version}")
    if h.word_bits != WORD_BITS:
        raise IndexFormatError(f"index built for {h.word_bits}-bit words, this build uses {WORD_BITS}")
    return h


def _read_sections(data: bytes, h: Header) -> dict[bytes, np.ndarray]:
    pos = len(MAGIC) + _HEADER.size
    end = len(data) - 4
    out: dict[bytes, np.ndarray] = {}
    for _ in range(h.sections):
        if pos + _SECTION.size > end:
            raise IndexFormatError("truncated section table")
        tag, code, count = _SECTION.unpack_from(data, pos)
        pos += _SECTION.size
        dt = _DTYPES.get(code)
        if dt is None:
            raise IndexFormatError(f"section {tag!r} has unknown type {code!r}")
        size = count * dt.itemsize
        if pos + size > end:
            raise IndexFormatError(f"section {tag!r} runs past end of file")
        out[tag] = np.frombuffer(data, dtype=dt, count=count, offset=pos)
        pos += size
    if pos != end:
        raise IndexFormatError("trailing bytes after last section")
    return out


def _groups(sec: dict, tag: bytes, with_vals: bool = True) -> list[list[tuple[int, int]]]:
    ptr = sec[tag + b"PT"].tolist()
    keys = sec[tag + b"KY"].tolist()
    vals = sec[tag + b"VL"].tolist() if with_vals else [0] * len(keys)
    if len(vals) != len(keys) or not ptr or ptr[-1] != len(keys):
        raise IndexFormatError(f"inconsistent {tag.decode()} section")
    return [list(zip(keys[ptr[i]:ptr[i + 1]], vals[ptr[i]:ptr[i + 1]])) for i in range(len(ptr) - 1)]


def loads(data: bytes, strict: bool = True) -> IndexBundle:
    """Parse an index file.

    With ``strict`` a checksum mismatch is an error; otherwise it is recorded
    on the bundle so a verifier can still inspect the damaged index.
    """
    h = read_header(data)
    crc_ok = len(data) >= 4 and struct.unpack_from("<I", data, len(data) - 4)[0] == zlib.crc32(data[:-4])
    if strict and not crc_ok:
        raise IndexFormatError("checksum mismatch; the file is corrupted")
    try:
        sec = _read_sections(data, h)
        return _assemble(h, sec, crc_ok)
    except KeyError as e:
        raise IndexFormatError(f"missing section {e.args[0]!r}") from None
    except (IndexError, ValueError) as e:
        if isinstance(e, IndexFormatError):
            raise
        raise IndexFormatError(f"malformed index: {e}") from None


def _check_tree_arrays(n, parent, depth, sa_lo, sa_hi, edge_start, child_ptr, child_ids,
                       leaf_of_sa) -> None:
    """Range checks that keep later array indexing in bounds.

    Semantic damage (wrong but in-range values) is left to the verifier.
    """
    num = len(depth)

    def within(a, lo, hi, what):
        if len(a) and (a.min() < lo or a.max() > hi):
            raise IndexFormatError(f"tree {what} out of range")

    if num == 0 or any(len(a) != num for a in (parent, sa_lo, sa_hi, edge_start)):
        raise IndexFormatError("tree arrays disagree in length")
    if len(child_ptr) != num + 1 or len(child_ids) != num - 1 or len(leaf_of_sa) != n:
        raise IndexFormatError("tree child or leaf arrays have the wrong length")
    within(parent, -1, num - 1, "parent")
    within(depth, 0, n + 1, "depth")
    within(sa_lo, 0, n, "sa range")
    within(sa_hi, 0, n, "sa range")
    within(edge_start, 0, n, "edge start")
    within(child_ptr, 0, num - 1, "child pointer")
    if len(child_ptr) > 1 and (np.diff(child_ptr) < 0).any():
        raise IndexFormatError("tree child pointers are not monotone")
    within(child_ids, 0, num - 1, "child id")
    within(leaf_of_sa, 0, num - 1, "leaf id")


def _assemble(h: Header, sec: dict, crc_ok: bool) -> IndexBundle:
    alphabet = Alphabet.from_symbols(sec[b"ALPH"].tobytes())
    if (alphabet.sigma, alphabet.bits, alphabet.alpha) != (h.sigma, h.bits, h.alpha):
        raise IndexFormatError("alphabet section disagrees with header")
    words = array("Q", sec[b"TEXT"].astype("<u8").tobytes())
    if len(words) != h.n // h.alpha + 1:
        raise IndexFormatError("text section has the wrong number of words")
    text = PackedText(words, h.n, alphabet)
    sa_arr, lcp_arr = sec[b"SA  "], sec[b"LCP "]
    if len(sa_arr) != h.n or len(lcp_arr) != h.n:
        raise IndexFormatError("suffix array length disagrees with header")
    sa = suffix_array_from_arrays(sa_arr.tolist(), lcp_arr.tolist())
    tarr = [sec[f"T{i:03d}".encode()] for i in range(len(_TREE_FIELDS))]
    _check_tree_arrays(h.n, *tarr)
    tree = tree_from_arrays(text, *tarr)

    if h.max_short != max_short_length(h.sigma, h.n):
        raise IndexFormatError(f"short table length {h.max_short} disagrees with sigma and n")
    offsets = _offsets(h.sigma, h.max_short)
    entries = array("q", sec[b"SHRT"].astype("<i8").tobytes())
    if len(entries) != offsets[h.max_short + 1]:
        raise IndexFormatError("short table size disagrees with header")
    short = ShortPatternTable(h.max_short, h.sigma, offsets, entries)

    if h.threshold < 2:
        raise IndexFormatError(f"invalid threshold {h.threshold}")
    hc = classify_heavy(tree, h.n, h.threshold)
    rec = sec[b"MREC"].tolist()
    pwords = sec[b"MPWD"].tolist()
    if len(rec) != _MICRO_FIELDS * len(pwords):
        raise IndexFormatError("micro-tree records are inconsistent")
    leaves = _groups(sec, b"ML", with_vals=False)
    nav, light, heavy = _groups(sec, b"NV"), _groups(sec, b"LP"), _groups(sec, b"HP")
    if not len(leaves) == len(nav) == len(light) == len(heavy) == len(pwords):
        raise IndexFormatError("micro-tree sections disagree on the number of trees")
    micro = []
    for i, pw in enumerate(pwords):
        root, depth, kind, nxt, sstart, slen = rec[i * _MICRO_FIELDS:(i + 1) * _MICRO_FIELDS]
        kind = MicroKind(kind)
        if not -1 <= nxt < len(pwords) or (kind is MicroKind.TYPE2B and (slen < 1 or nxt < 0)):
            raise IndexFormatError(f"micro tree {i} has an invalid successor record")
        mt = MicroTree(i, root, depth, kind, [v for v, _ in leaves[i]],
                       DetDictionary(nav[i]) if kind is MicroKind.TYPE1 else None,
                       nxt, pw, sstart, slen, DetPredecessor(light[i]), DetPredecessor(heavy[i]))
        micro.append(mt)
    lg = sec[b"LEDG"].tolist()
    if len(lg) != 4:
        raise IndexFormatError("promotion ledger section has the wrong size")
    heavy_ix = HeavyIndex(tree, alphabet.alpha, alphabet.bits, hc, micro,
                          sec[b"PLOW"].tolist(), sec[b"PDEP"].tolist(), PromotionLedger(*lg))

    records = None
    if b"FSTA" in sec:
        names = sec[b"FNAM"].tobytes().decode("utf-8", "replace").split("\n")
        starts = sec[b"FSTA"].tolist()
        if len(names) != len(starts):
            raise IndexFormatError("FASTA record sections disagree")
        records = Records(names, starts)
    idx = PackedIndex(text, sa, tree, short, heavy_ix)
    warnings = [] if crc_ok else ["checksum mismatch"]
    return IndexBundle(idx, records, h, crc_ok, warnings)


def load(path: str | Path, strict: bool = True) -> IndexBundle:
    return loads(Path(path).read_bytes(), strict=strict)
