"""Shared test utilities: independent oracles and synthetic libraries.

The oracles here deliberately avoid the package's own algorithms: rank
order comes from itertools enumeration, coverage probabilities from
exhaustive counting with exact rationals.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from stegogame.library import CoverEntry, CoverLibrary, hash_bytes


def lex_arrangements(T: int, N: int) -> list[tuple[int, ...]]:
    """All N-arrangements of range(T) in lexicographic order."""
    return list(itertools.permutations(range(T), N))


def coverage_enumeration(x: int, N: int, T: int) -> Fraction:
    """Exhaustive coverage probability: count draw-tuples of N-subsets whose
    union is everything, over all C(T,N)**x equally likely tuples."""
    subsets = list(itertools.combinations(range(T), N))
    full = frozenset(range(T))
    hits = 0
    for draw in itertools.product(subsets, repeat=x):
        seen = frozenset(itertools.chain.from_iterable(draw))
        if seen == full:
            hits += 1
    total = len(subsets) ** x
    return Fraction(hits, total)


def mem_library(T: int, tag: str = "lib") -> CoverLibrary:
    """In-memory library; ids are real digests of synthetic content, paths
    are never opened."""
    ids = sorted(hash_bytes(f"{tag}-{i}".encode()) for i in range(T))
    entries = tuple(
        CoverEntry(id=cid, path=f"mem://{cid[:8]}", nbytes=32) for cid in ids
    )
    return CoverLibrary(covers=entries)


def bits_of(value: int, length: int) -> str:
    return format(value, f"0{length}b") if length else ""
