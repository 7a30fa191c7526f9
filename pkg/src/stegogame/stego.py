"""The coverless scheme: key generation, embed, extract.

Embedding never touches cover bytes.  The payload is XORed with an equally
long uniform key, the result is read as an arrangement rank, and the
arrangement's indices are resolved to cover ids through the library's
canonical order.  The transmitted object is just the ordered list of ids.
"""

from __future__ import annotations

import os
import re
import secrets
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

from .bits import bits_to_hex, hex_to_bits, int_to_bits, validate_bits, xor_bits
from .errors import (
    EntropyUnavailable,
    InvalidParams,
    LengthMismatch,
    MalformedFile,
)
from .library import DIGEST_HEX_LEN, CoverId, CoverLibrary
from .permcodec import Arrangement, arrangement_to_bits, bits_to_arrangement, capacity

import json

SEQUENCE_VERSION = 1


@dataclass(frozen=True)
class StegoKey:
    """Uniformly random l-bit key; the key space has size 2**l."""

    bits: str

    def __post_init__(self):
        validate_bits(self.bits)

    @property
    def l(self) -> int:
        return len(self.bits)


@dataclass(frozen=True)
class Message:
    """One l-bit payload block; exactly one block is carried per sequence."""

    bits: str

    def __post_init__(self):
        validate_bits(self.bits)

    @property
    def l(self) -> int:
        return len(self.bits)


@dataclass(frozen=True)
class StegoSequence:
    """Ordered cover ids as exchanged on the channel."""

    ids: tuple[CoverId, ...]

    def __post_init__(self):
        object.__setattr__(self, "ids", tuple(self.ids))

    @property
    def N(self) -> int:
        return len(self.ids)


class EntropySource(Protocol):
    def bits(self, n: int) -> str: ...


class SystemEntropy:
    """OS-backed entropy; the production default."""

    def bits(self, n: int) -> str:
        try:
            return int_to_bits(secrets.randbits(n), n) if n else ""
        except (OSError, NotImplementedError) as exc:
            raise EntropyUnavailable(str(exc)) from exc


class SeededEntropy:
    """Deterministic entropy for tests and replayable experiments."""

    def __init__(self, seed: int):
        import random

        self._rng = random.Random(seed)

    def bits(self, n: int) -> str:
        return int_to_bits(self._rng.getrandbits(n), n) if n else ""


def keygen(l: int, entropy: EntropySource | None = None) -> StegoKey:
    """Sample an l-bit key from the given source (OS entropy by default)."""
    if not isinstance(l, int) or l < 1:
        raise InvalidParams(f"key length must be >= 1, got {l}")
    source = entropy if entropy is not None else SystemEntropy()
    drawn = source.bits(l)
    validate_bits(drawn)
    if len(drawn) != l:
        raise EntropyUnavailable(f"entropy source returned {len(drawn)} bits, wanted {l}")
    return StegoKey(bits=drawn)


def embed(m: Message, k: StegoKey, lib: CoverLibrary, N: int) -> StegoSequence:
    """Map one message block to a cover sequence under key k.

    Deterministic given (m, k, lib, N); reads only the library manifest,
    never cover file contents.
    """
    cap = capacity(lib.T, N)
    if m.l != cap.l or k.l != cap.l:
        raise LengthMismatch(
            f"message has {m.l} bits, key {k.l}; capacity(T={lib.T}, N={N}) needs {cap.l}"
        )
    payload = xor_bits(m.bits, k.bits)
    arr = bits_to_arrangement(payload, lib.T, N)
    return StegoSequence(ids=tuple(lib.id_at(i) for i in arr.indices))


def extract(seq: StegoSequence, k: StegoKey, lib: CoverLibrary) -> Message:
    """Invert :func:`embed`.  A wrong key yields garbage, not an error.

    A cover id that does not resolve in the library is surfaced as
    NotInLibrary: the sequence cannot have come from this library, which
    is itself a detection signal for the receiver.
    """
    indices = tuple(lib.lookup(cid) for cid in seq.ids)
    arr = Arrangement(indices=indices, T=lib.T)
    payload = arrangement_to_bits(arr)
    if k.l != len(payload):
        raise LengthMismatch(
            f"key has {k.l} bits, sequence decodes to {len(payload)}"
        )
    return Message(bits=xor_bits(payload, k.bits))


# ---------------------------------------------------------------------------
# file formats

_KEY_LINE1 = re.compile(r"^l=(\d+)$")


def save_key(key: StegoKey, path: str | os.PathLike) -> None:
    """Key file: line 1 ``l=<int>``, line 2 the bits as MSB-first hex."""
    Path(path).write_text(f"l={key.l}\n{bits_to_hex(key.bits)}\n", encoding="utf-8")


def load_key(path: str | os.PathLike) -> StegoKey:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedFile(f"cannot read key file {path}: {exc}") from exc
    lines = text.splitlines()
    if len(lines) < 2:
        raise MalformedFile(f"key file {path} needs two lines, got {len(lines)}")
    m = _KEY_LINE1.match(lines[0].strip())
    if not m:
        raise MalformedFile(f"key file {path}: first line must be 'l=<int>'")
    l = int(m.group(1))
    try:
        bits = hex_to_bits(lines[1].strip().lower(), l)
    except Exception as exc:
        raise MalformedFile(f"key file {path}: {exc}") from exc
    return StegoKey(bits=bits)


def sequence_to_json(seq: StegoSequence) -> dict:
    return {"version": SEQUENCE_VERSION, "N": seq.N, "ids": list(seq.ids)}


def sequence_from_json(doc: dict) -> StegoSequence:
    try:
        if doc["version"] != SEQUENCE_VERSION:
            raise MalformedFile(f"unsupported sequence version {doc['version']!r}")
        ids = tuple(doc["ids"])
        declared_n = doc["N"]
    except (KeyError, TypeError) as exc:
        raise MalformedFile(f"sequence missing field: {exc}") from exc
    if declared_n != len(ids):
        raise MalformedFile(f"sequence declares N={declared_n} but lists {len(ids)} ids")
    for cid in ids:
        if not isinstance(cid, str) or len(cid) != DIGEST_HEX_LEN:
            raise MalformedFile(f"bad cover id {cid!r}")
    return StegoSequence(ids=ids)


def save_sequence(seq: StegoSequence, path: str | os.PathLike) -> None:
    Path(path).write_text(
        json.dumps(sequence_to_json(seq), separators=(",", ":")) + "\n", encoding="utf-8"
    )


def load_sequence(path: str | os.PathLike) -> StegoSequence:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise MalformedFile(f"cannot read sequence file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"{path}: not valid JSON ({exc})") from exc
    return sequence_from_json(doc)
