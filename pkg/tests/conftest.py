from __future__ import annotations

import random

import pytest

from stegogame.library import build_library


@pytest.fixture
def make_covers(tmp_path):
    """Factory writing n deterministic pseudo-random cover files."""

    def _make(n: int, size: int = 256, tag: str = "cover"):
        rng = random.Random(f"{tag}/{n}/{size}")
        paths = []
        for i in range(n):
            p = tmp_path / f"{tag}{i}.bin"
            p.write_bytes(rng.randbytes(size))
            paths.append(p)
        return paths

    return _make


@pytest.fixture
def file_library(make_covers):
    """Six-cover library backed by real files."""
    return build_library(make_covers(6))
