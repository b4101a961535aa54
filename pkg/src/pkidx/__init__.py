"""Deterministic full-text index over bit-packed strings."""

from .io import IndexBundle, IndexFormatError, Records, dumps, load, loads, save
from .oracle import NaiveIndex
from .packed import Alphabet, PackedText, PackingError, build_alphabet, pack
from .query import Answer, PackedIndex, QueryTrace, count, locate, predecessor

__all__ = [
    "Alphabet", "Answer", "IndexBundle", "IndexFormatError", "NaiveIndex", "PackedIndex",
    "PackedText", "PackingError", "QueryTrace", "Records", "build_alphabet", "count", "dumps",
    "load", "loads", "locate", "pack", "predecessor", "save",
]

__version__ = "0.1.0"
