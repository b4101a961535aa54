import pytest

from pkidx import NaiveIndex, PackedIndex, dumps, loads
from pkidx.fasta import FastaError, RecordView, looks_like_fasta, parse_fasta

FASTA = b""">r1 first record
ACGT
AC
; comment
>r2
GTAC
"""


def test_parse():
    text, rec = parse_fasta(FASTA)
    assert text == b"ACGTACGTAC"
    assert rec.names == ["r1", "r2"] and rec.starts == [0, 6]
    assert looks_like_fasta(FASTA) and not looks_like_fasta(b"ACGT")


def test_errors():
    with pytest.raises(FastaError):
        parse_fasta(b"ACGT\n>r\nA\n")
    with pytest.raises(FastaError):
        parse_fasta(b">r1\n>r2\n")


def test_no_cross_record_matches():
    text, rec = parse_fasta(FASTA)
    view = RecordView(PackedIndex.build(text), rec)
    assert sorted(view.locate(b"ACG")) == [0]      # position 4 spans r1/r2
    assert view.count(b"GTA") == 2
    assert [view.label(p) for p in sorted(view.locate(b"TA"))] == ["r1:3", "r2:1"]
    assert view.count(b"CGTACG") == 0


def test_filter_matches_per_record_oracle():
    import random
    rng = random.Random(4)
    for _ in range(30):
        recs = [bytes(rng.choice(b"ab") for _ in range(rng.randint(1, 30))) for _ in range(rng.randint(1, 5))]
        data = b"".join(b">s%d\n%s\n" % (i, r) for i, r in enumerate(recs))
        text, rec = parse_fasta(data)
        view = RecordView(PackedIndex.build(text), rec)
        for _ in range(30):
            p = bytes(rng.choice(b"ab") for _ in range(rng.randint(1, 6)))
            want = []
            for s, r in zip(rec.starts, recs):
                want.extend(s + i for i in NaiveIndex(r).locate(p))
            assert sorted(view.locate(p)) == sorted(want)


def test_records_survive_serialization():
    text, rec = parse_fasta(FASTA)
    bundle = loads(dumps(PackedIndex.build(text), rec))
    assert bundle.records.names == ["r1", "r2"]
    assert bundle.records.starts == [0, 6]
