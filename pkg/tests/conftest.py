import random

import pytest

from pkidx.packed import Alphabet


def random_text(rng: random.Random, sigma: int, n: int, base: int = 0) -> bytes:
    """n bytes drawn from ``sigma`` distinct symbols (every symbol not guaranteed)."""
    symbols = rng.sample(range(256), sigma) if base is None else list(range(base, base + sigma))
    return bytes(rng.choice(symbols) for _ in range(n))


def mixed_patterns(rng: random.Random, raw: bytes, count: int, lengths) -> list[bytes]:
    symbols = sorted(set(raw))
    n = len(raw)
    out = []
    for k in range(count):
        m = max(1, min(rng.choice(lengths), n))
        kind = k % 3
        if kind == 2:
            out.append(bytes(rng.choice(symbols) for _ in range(m)))
            continue
        i = rng.randrange(n - m + 1)
        p = bytearray(raw[i:i + m])
        if kind == 1:
            p[rng.randrange(m)] = rng.choice(symbols)
        out.append(bytes(p))
    return out


@pytest.fixture
def rng():
    return random.Random(12345)


def alphabet_of(raw: bytes) -> Alphabet:
    return Alphabet.from_symbols(raw)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
