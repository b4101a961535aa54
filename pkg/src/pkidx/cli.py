"""``pkidx`` command-line tool.

Exit codes: 0 ok, 1 query or data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import codecs
import functools
import logging
import os
import sys
from bisect import bisect_right
from pathlib import Path
from typing import Iterable, Optional

from .fasta import FastaError, RecordView, looks_like_fasta, parse_fasta
from .io import IndexFormatError, Records, load, save
from .oracle import NaiveIndex, _suffix_greater
from .packed import PackingError
from .query import PackedIndex, QueryTrace
from .verify import run_all, stats

log = logging.getLogger("pkidx")

EXIT_OK, EXIT_ERROR, EXIT_USAGE = 0, 1, 2


class CliError(Exception):
    pass


def _setup_logging() -> None:
    level = os.environ.get("PKIDX_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def _read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def _load(path: str, strict: bool = True):
    try:
        return load(path, strict=strict)
    except OSError as e:
        raise CliError(f"cannot read index {path}: {e.strerror or e}") from None
    except IndexFormatError as e:
        raise CliError(f"{path}: {e}") from None


# -- build -------------------------------------------------------------------


def cmd_build(args) -> int:
    data = _read_input(args.input)
    records: Optional[Records] = None
    if args.fasta or (not args.raw and looks_like_fasta(data)):
        text, records = parse_fasta(data)
    else:
        text = data
    idx = PackedIndex.build(text, threshold=args.force_threshold)
    save(idx, args.output, records)
    log.info("wrote %s: n=%d sigma=%d t=%d", args.output, idx.n, idx.alphabet.sigma,
             idx.heavy.threshold)
    return EXIT_OK


# -- query -------------------------------------------------------------------


class NaiveEngine:
    """Reference engine; locate is reported in suffix order like the index."""

    def __init__(self, raw: bytes):
        self.raw = raw
        self.naive = NaiveIndex(raw)

    def _suffix_order(self, positions: list[int]) -> list[int]:
        raw = self.raw

        def cmp(i: int, j: int) -> int:
            return 0 if i == j else (1 if _suffix_greater(raw, i, j, 0) else -1)
        return sorted(positions, key=functools.cmp_to_key(cmp))

    def count(self, p: bytes) -> int:
        return self.naive.count(p)

    def locate(self, p: bytes) -> list[int]:
        return self._suffix_order(self.naive.locate(p))

    def predecessor(self, p: bytes) -> Optional[int]:
        return self.naive.predecessor(p)


class NaiveRecordEngine(NaiveEngine):
    def __init__(self, raw: bytes, records: Records):
        super().__init__(raw)
        self.starts = records.starts
        self.ends = records.starts[1:] + [len(raw)]

    def locate(self, p: bytes) -> list[int]:
        m = len(p)
        keep = [i for i in self.naive.locate(p)
                if i + m <= self.ends[bisect_right(self.starts, i) - 1]]
        return self._suffix_order(keep)

    def count(self, p: bytes) -> int:
        return len(self.locate(p))


def _patterns(args) -> Iterable[bytes | Exception]:
    raw: list[bytes] = [os.fsencode(p) for p in args.patterns]
    if args.file:
        data = _read_input(args.file)
        raw.extend(data.splitlines())
    elif not args.patterns:
        raw.extend(sys.stdin.buffer.read().splitlines())
    for p in raw:
        if not args.escapes:
            yield p
            continue
        try:
            yield codecs.escape_decode(p)[0]
        except ValueError as e:
            yield e


def _format_result(mode: str, value, view: Optional[RecordView], sort_positions: bool) -> str:
    if mode == "count":
        return str(value)
    if mode == "predecessor":
        if value is None:
            return "-"
        return view.label(value) if view is not None else str(value)
    pos = sorted(value) if sort_positions else value
    if view is not None:
        return " ".join(view.label(p) for p in pos)
    return " ".join(map(str, pos))


def cmd_query(args) -> int:
    bundle = _load(args.index)
    idx, records = bundle.index, bundle.records
    view = RecordView(idx, records) if records is not None else None
    if args.engine == "naive":
        raw = idx.text.to_bytes()
        engine = NaiveRecordEngine(raw, records) if records is not None else NaiveEngine(raw)
    else:
        engine = view if view is not None else idx

    status = EXIT_OK
    out = sys.stdout
    for pid, p in enumerate(_patterns(args)):
        if isinstance(p, Exception):
            out.write(f"{pid}\t{args.mode}\terror: bad pattern encoding: {p}\n")
            status = EXIT_ERROR
            continue
        trace = QueryTrace() if args.trace else None
        try:
            if args.mode == "count":
                value = engine.count(p)
            elif args.mode == "locate":
                value = engine.locate(p)
            else:
                value = engine.predecessor(p)
            if trace is not None:
                if args.engine == "naive":
                    trace.path = "naive"
                else:
                    idx.query(p, trace=trace)
        except Exception as e:  # a broken index must not abort the whole batch
            log.debug("query %d failed", pid, exc_info=True)
            out.write(f"{pid}\t{args.mode}\terror: {type(e).__name__}: {e}\n")
            status = EXIT_ERROR
            continue
        if trace is not None:
            for line in trace.lines():
                out.write(f"# {pid} {line}\n")
        out.write(f"{pid}\t{args.mode}\t{_format_result(args.mode, value, view, args.sort_positions)}\n")
    return status


# -- verify / stats ----------------------------------------------------------


def cmd_verify(args) -> int:
    bundle = _load(args.index, strict=False)
    results = run_all(bundle.index, samples=args.samples, seed=args.seed,
                      checksum_ok=bundle.checksum_ok)
    for r in results:
        sys.stdout.write(r.line() + "\n")
    ok = all(r.passed for r in results)
    sys.stdout.write(f"verify\t{'pass' if ok else 'FAIL'}\n")
    return EXIT_OK if ok else EXIT_ERROR


def cmd_stats(args) -> int:
    bundle = _load(args.index)
    idx = bundle.index
    info = stats(idx)
    if bundle.records is not None:
        info["records"] = len(bundle.records)
    for k, v in info.items():
        sys.stdout.write(f"{k}\t{v}\n")
    if args.figures:
        from .report import render_figures
        for path in render_figures(idx, args.figures):
            sys.stdout.write(f"figure\t{path}\n")
    return EXIT_OK


# -- entry point -------------------------------------------------------------


def _threshold(s: str) -> int:
    t = int(s)
    if t < 2:
        raise argparse.ArgumentTypeError("threshold must be at least 2")
    return t


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pkidx", description="Packed-string full-text index.")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build an index file from a text or FASTA file")
    b.add_argument("input", help="input file, '-' for stdin")
    b.add_argument("-o", "--output", required=True)
    b.add_argument("--force-threshold", type=_threshold, metavar="T",
                   help="heavy-node leaf threshold instead of the default")
    kind = b.add_mutually_exclusive_group()
    kind.add_argument("--fasta", action="store_true", help="parse the input as FASTA")
    kind.add_argument("--raw", action="store_true", help="index the input bytes as-is")
    b.set_defaults(func=cmd_build)

    q = sub.add_parser("query", help="answer count / locate / predecessor queries")
    q.add_argument("index")
    q.add_argument("patterns", nargs="*", help="patterns; read from stdin when none are given")
    q.add_argument("--mode", choices=("count", "locate", "predecessor"), required=True)
    q.add_argument("-f", "--file", help="read one pattern per line from this file")
    q.add_argument("--trace", action="store_true", help="emit '#' trace lines")
    q.add_argument("--engine", choices=("indexed", "naive"), default="indexed")
    q.add_argument("--sort-positions", action="store_true",
                   help="print locate positions ascending instead of in suffix order")
    q.add_argument("--escapes", action="store_true",
                   help="interpret backslash escapes such as \\x00 in patterns")
    q.set_defaults(func=cmd_query)

    v = sub.add_parser("verify", help="run the invariant suites on an index")
    v.add_argument("index")
    v.add_argument("--samples", type=int, default=200,
                   help="sampled SA and differential checks; 0 runs structural checks only")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("stats", help="print index statistics")
    s.add_argument("index")
    s.add_argument("--figures", metavar="DIR", help="also write PNG figures into DIR")
    s.set_defaults(func=cmd_stats)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    _setup_logging()
    ap = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args, extra = ap.parse_known_args(argv)
    if extra:
        # query patterns may follow the options; anything else is a usage error
        literal = argv[argv.index("--") + 1:] if "--" in argv else []
        extra = [x for x in extra if x != "--"]
        if args.command != "query" or any(x.startswith("-") and x != "-" and x not in literal
                                          for x in extra):
            ap.error(f"unrecognized arguments: {' '.join(extra)}")
        args.patterns = list(args.patterns) + extra
    try:
        return args.func(args)
    except (CliError, PackingError, FastaError) as e:
        print(f"pkidx: error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except BrokenPipeError:
        return EXIT_OK
    except OSError as e:
        print(f"pkidx: error: {e.filename or ''}: {e.strerror or e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
