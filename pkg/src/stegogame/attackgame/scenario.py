"""Game setup: secret library, world pool, leak schedule, oracle budgets.

A scenario pins down everything the detection game needs beyond the
adversary itself.  The world pool models the channel's natural traffic and
may overlap the secret library or not; that choice is the scenario author's
to make.  Cover content is resolved through the scenario so tests can run
fully in memory while CLI runs read real files.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import numpy as np

from ..errors import CoverReadError, InvalidConfig, MalformedFile, NotInLibrary
from ..library import CoverEntry, CoverId, CoverLibrary, load_manifest

KEY_LEAK_MODES = (None, "full", "flip1")


@dataclass(frozen=True, eq=False)
class Scenario:
    """Everything fixed before an attack game starts, except the adversary."""

    library: CoverLibrary
    world: CoverLibrary
    N: int
    leak_fraction: float = 0.0
    leak_growth: float = 0.0
    oracle_embed_budget: int = 64
    oracle_extract_budget: int = 64
    rounds: int = 1
    observations: int = 16
    key_leak: str | None = None
    content_map: Mapping[CoverId, bytes] | None = None

    def __post_init__(self):
        if not (1 <= self.N <= self.library.T):
            raise InvalidConfig(f"need 1 <= N <= T={self.library.T}, got N={self.N}")
        if self.world.T < self.N:
            raise InvalidConfig(
                f"world pool holds {self.world.T} covers, fewer than N={self.N}"
            )
        if not (0.0 <= self.leak_fraction <= 1.0):
            raise InvalidConfig(f"leak_fraction must be in [0,1], got {self.leak_fraction}")
        if self.leak_growth < 0.0:
            raise InvalidConfig(f"leak_growth must be >= 0, got {self.leak_growth}")
        if self.oracle_embed_budget < 0 or self.oracle_extract_budget < 0:
            raise InvalidConfig("oracle budgets must be >= 0")
        if self.rounds < 1:
            raise InvalidConfig(f"rounds must be >= 1, got {self.rounds}")
        if self.observations < 0:
            raise InvalidConfig(f"observations must be >= 0, got {self.observations}")
        if self.key_leak not in KEY_LEAK_MODES:
            raise InvalidConfig(f"key_leak must be one of {KEY_LEAK_MODES}")

    def leak_size(self, round_index: int = 0) -> int:
        """Leaked-subset size for a given round; grows linearly, capped at T."""
        fraction = self.leak_fraction + round_index * self.leak_growth
        return min(self.library.T, int(fraction * self.library.T + 1e-9))

    def content_for(self, cover_id: CoverId) -> bytes:
        """Bytes of a cover, from the in-memory map or the backing file."""
        if self.content_map is not None and cover_id in self.content_map:
            return self.content_map[cover_id]
        for lib in (self.library, self.world):
            try:
                entry = lib.lookup_entry(cover_id)
            except NotInLibrary:
                continue
            try:
                return Path(entry.path).read_bytes()
            except OSError as exc:
                raise CoverReadError(entry.path, str(exc)) from exc
        raise NotInLibrary(cover_id)


def load_scenario(path: str | os.PathLike) -> Scenario:
    """Read a scenario description from JSON.

    Fields: library, world_pool (manifest paths, relative to the scenario
    file), N, and optionally leak_fraction, leak_growth, oracle budgets,
    rounds, observations, key_leak.
    """
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise MalformedFile(f"cannot read scenario {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise MalformedFile(f"{path}: scenario must be a JSON object")
    try:
        lib_path = path.parent / doc["library"]
        world_path = path.parent / doc["world_pool"]
        n = doc["N"]
    except KeyError as exc:
        raise MalformedFile(f"{path}: scenario missing field {exc}") from exc
    optional = {
        key: doc[key]
        for key in (
            "leak_fraction",
            "leak_growth",
            "oracle_embed_budget",
            "oracle_extract_budget",
            "rounds",
            "observations",
            "key_leak",
        )
        if key in doc
    }
    return Scenario(
        library=load_manifest(lib_path),
        world=load_manifest(world_path),
        N=n,
        **optional,
    )


# ---------------------------------------------------------------------------
# synthetic corpora for experiments and self-tests

def synthetic_corpus(count: int, size: int = 2048, seed: int = 0) -> dict[CoverId, bytes]:
    """Deterministic corpus of random-byte covers, keyed by content digest."""
    if count < 1 or size < 1:
        raise InvalidConfig("count and size must be >= 1")
    gen = np.random.Generator(np.random.Philox(key=seed))
    corpus: dict[CoverId, bytes] = {}
    while len(corpus) < count:
        blob = gen.integers(0, 256, size=size, dtype=np.uint8).tobytes()
        corpus[hashlib.sha256(blob).hexdigest()] = blob
    return corpus


def _library_of(ids: list[CoverId], corpus: Mapping[CoverId, bytes]) -> CoverLibrary:
    entries = tuple(
        CoverEntry(id=cid, path=f"mem://{cid[:12]}", nbytes=len(corpus[cid]))
        for cid in sorted(ids)
    )
    return CoverLibrary(covers=entries)


def synthetic_scenario(
    T: int,
    N: int,
    world_size: int = 64,
    disjoint_world: bool = False,
    seed: int = 0,
    cover_size: int = 2048,
    **kwargs,
) -> Scenario:
    """In-memory scenario over a synthetic corpus.

    The secret library holds T covers.  The world pool holds ``world_size``
    covers from the same corpus: a superset of the library by default
    (overlapping traffic), or fully disjoint when ``disjoint_world`` is set.
    """
    if disjoint_world:
        corpus = synthetic_corpus(T + world_size, size=cover_size, seed=seed)
        ids = list(corpus)
        gen = np.random.Generator(np.random.Philox(key=seed, counter=1 << 128))
        order = gen.permutation(len(ids))
        lib_ids = [ids[i] for i in order[:T]]
        world_ids = [ids[i] for i in order[T : T + world_size]]
    else:
        if world_size < T:
            raise InvalidConfig("overlapping world pool must be at least as large as T")
        corpus = synthetic_corpus(world_size, size=cover_size, seed=seed)
        ids = list(corpus)
        gen = np.random.Generator(np.random.Philox(key=seed, counter=1 << 128))
        order = gen.permutation(len(ids))
        lib_ids = [ids[i] for i in order[:T]]
        world_ids = ids
    return Scenario(
        library=_library_of(lib_ids, corpus),
        world=_library_of(world_ids, corpus),
        N=N,
        content_map=corpus,
        **kwargs,
    )
