"""FASTA ingestion.

Records are concatenated into one text with no separator symbol; the record
boundaries are kept as offsets and matches that straddle a boundary are
dropped at query time.
"""

from __future__ import annotations

from bisect import bisect_right
from typing import Optional

from .io import Records
from .query import PackedIndex


class FastaError(ValueError):
    pass


def parse_fasta(data: bytes) -> tuple[bytes, Records]:
    names: list[str] = []
    starts: list[int] = []
    seq: list[bytes] = []
    total = 0
    for lineno, line in enumerate(data.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith(b";"):
            continue
        if line.startswith(b">"):
            names.append(line[1:].split(maxsplit=1)[0].decode("utf-8", "replace") if line[1:].strip() else f"record{len(names)}")
            starts.append(total)
            continue
        if not names:
            raise FastaError(f"line {lineno}: sequence data before the first '>' header")
        seq.append(line)
        total += len(line)
    if not names:
        raise FastaError("no FASTA records found")
    text = b"".join(seq)
    if not text:
        raise FastaError("FASTA records contain no sequence")
    return text, Records(names, starts)


def looks_like_fasta(data: bytes) -> bool:
    return data.lstrip()[:1] == b">"


class RecordView:
    """Count and Locate restricted to matches inside a single record."""

    def __init__(self, index: PackedIndex, records: Records):
        self.index = index
        self.records = records
        self.ends = records.starts[1:] + [index.n]

    def record_of(self, pos: int) -> int:
        return bisect_right(self.records.starts, pos) - 1

    def _keep(self, pos: int, m: int) -> bool:
        r = self.record_of(pos)
        return pos + m <= self.ends[r]

    def locate(self, pattern: bytes) -> list[int]:
        """Global positions of in-record matches, suffix-array order."""
        m = len(pattern)
        return [p for p in self.index.locate(pattern) if self._keep(p, m)]

    def count(self, pattern: bytes) -> int:
        return len(self.locate(pattern))

    def label(self, pos: int) -> str:
        r = self.record_of(pos)
        return f"{self.records.names[r]}:{pos - self.records.starts[r]}"

    def predecessor(self, pattern: bytes) -> Optional[int]:
        # lexicographic order is defined on the concatenated text
        return self.index.predecessor(pattern)
