import random
import struct

import pytest

from pkidx import IndexFormatError, PackedIndex, dumps, load, loads, save
from pkidx.io import MAGIC, read_header


def test_banana_header(tmp_path):
    path = tmp_path / "b.idx"
    save(PackedIndex.build(b"banana"), path)
    h = read_header(path.read_bytes())
    assert (h.n, h.sigma, h.bits, h.alpha, h.word_bits) == (6, 3, 2, 32, 64)
    assert path.read_bytes()[:6] == b"PKIDX1"


def test_round_trip_queries():
    rng = random.Random(1)
    for _ in range(1000):
        sigma = rng.choice([1, 2, 4, 16, 255])
        n = rng.randint(1, 120)
        raw = bytes(rng.randrange(sigma) for _ in range(n))
        idx = PackedIndex.build(raw, threshold=rng.choice([None, 2, 3]))
        data = dumps(idx)
        back = loads(data).index
        assert dumps(back) == data
        for _ in range(100):
            i = rng.randrange(n)
            p = raw[i:i + rng.randint(1, 40)]
            if rng.random() < 0.3:
                p = bytes(rng.randrange(256) for _ in range(rng.randint(1, 5)))
            assert back.query(p) == idx.query(p)


def test_deterministic_bytes():
    rng = random.Random(2)
    for _ in range(20):
        raw = bytes(rng.choice(b"acgt") for _ in range(rng.randint(1, 2000)))
        assert dumps(PackedIndex.build(raw)) == dumps(PackedIndex.build(raw))


def test_rejects_other_word_width():
    data = bytearray(dumps(PackedIndex.build(b"banana")))
    struct.pack_into("<I", data, len(MAGIC) + 4, 32)
    with pytest.raises(IndexFormatError, match="32-bit"):
        loads(bytes(data))


def test_rejects_inflated_short_length():
    data = bytearray(dumps(PackedIndex.build(b"banana")))
    struct.pack_into("<Q", data, len(MAGIC) + 20 + 16, 1 << 48)
    with pytest.raises(IndexFormatError, match="short table"):
        loads(bytes(data), strict=False)


def test_rejects_garbage_and_truncation(tmp_path):
    with pytest.raises(IndexFormatError):
        loads(b"not an index")
    data = dumps(PackedIndex.build(b"mississippi"))
    with pytest.raises(IndexFormatError):
        loads(data[:-20])
    with pytest.raises(IndexFormatError):
        loads(data[:40], strict=False)


def test_checksum_strict_and_lenient():
    data = bytearray(dumps(PackedIndex.build(b"mississippi")))
    pos = data.index(b"SA  ") + 16
    data[pos] ^= 1
    with pytest.raises(IndexFormatError, match="checksum"):
        loads(bytes(data))
    bundle = loads(bytes(data), strict=False)
    assert not bundle.checksum_ok


def test_random_corruption_never_crashes():
    rng = random.Random(3)
    base = dumps(PackedIndex.build(b"abracadabra" * 5, threshold=2))
    for _ in range(300):
        data = bytearray(base)
        for _ in range(rng.randint(1, 4)):
            data[rng.randrange(len(data))] = rng.randrange(256)
        try:
            loads(bytes(data), strict=False)
        except IndexFormatError:
            pass


def test_file_round_trip(tmp_path):
    idx = PackedIndex.build(b"the quick brown fox")
    save(idx, tmp_path / "x.idx")
    assert load(tmp_path / "x.idx").index.locate(b"o") == idx.locate(b"o")
