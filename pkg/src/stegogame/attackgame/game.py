"""Detection and recovery games against a pluggable adversary.

Each trial runs a learning phase (level-scoped knowledge, budgeted oracle
handles) and a challenge phase (fair coin: fresh stego sequence or natural
draw from the world pool).  The ">50% success" criterion is judged with a
one-sided exact binomial test, never a raw rate comparison.

Every random draw flows from a generator keyed by sha256 over
(seed, labelled path), so results are byte-identical across runs, platforms,
and worker counts.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import IntEnum
from typing import Callable, Protocol

import numpy as np
from scipy.stats import binomtest

from ..bits import validate_bits
from ..errors import InvalidConfig, OracleBudgetExceeded
from ..library import CoverId, default_workers
from ..permcodec import capacity
from ..stego import Message, SeededEntropy, StegoKey, StegoSequence, embed, extract, keygen
from .scenario import Scenario

MIN_TRIALS = 100
DEFAULT_ALPHA = 0.01

VERDICT_RESISTS = "resists"
VERDICT_BROKEN = "broken"

LABEL_STEGO = "stego"
LABEL_NATURAL = "natural"

_TRIAL_BLOCK = 64


class AttackLevel(IntEnum):
    """Adversary strength, ordered; higher levels know everything below."""

    SCOA = 1  # sees channel traffic only
    KCA = 2  # plus a leaked subset of the secret library
    CCA = 3  # plus budgeted embed/extract oracle handles
    ACCA = 4  # plus repeated learn/challenge rounds

    @classmethod
    def parse(cls, name: str) -> "AttackLevel":
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise InvalidConfig(
                f"unknown level {name!r}; choose from {[m.name.lower() for m in cls]}"
            ) from None


@dataclass(frozen=True, eq=False)
class Knowledge:
    """What one learning phase hands the adversary.  Level-scoped: fields
    above the adversary's level are empty/None, never absent."""

    level: AttackLevel
    N: int
    payload_bits: int
    world_ids: tuple[CoverId, ...]
    observed: tuple[StegoSequence, ...]
    leaked_ids: tuple[CoverId, ...]
    leaked_key: str | None
    embed_oracle: Callable[[str], StegoSequence] | None
    extract_oracle: Callable[[StegoSequence], str] | None
    rounds: int
    rng: np.random.Generator
    content: Callable[[CoverId], bytes]


@dataclass(frozen=True)
class Challenge:
    """What the adversary must label; carries no ground truth."""

    ids: tuple[CoverId, ...]


@dataclass(frozen=True)
class GameResult:
    level: str
    kind: str
    trials: int
    successes: int
    success_rate: float
    p_value: float
    alpha: float
    verdict: str
    seed: int
    stego_challenges: int | None = None
    sequences: int | None = None
    round_index: int | None = None


class Adversary(Protocol):
    name: str

    def learn(self, knowledge: Knowledge, state: object | None = None) -> object: ...

    def guess(self, challenge: Challenge, state: object) -> str: ...

    def recover(self, sequence: StegoSequence, state: object) -> str: ...


# ---------------------------------------------------------------------------
# deterministic stream derivation

def _derive_key(seed: int, *path: object) -> int:
    h = hashlib.sha256(b"stegogame.attackgame")
    h.update(str(seed).encode())
    for part in path:
        h.update(b"/")
        h.update(str(part).encode())
    return int.from_bytes(h.digest()[:16], "big")


def _generator(seed: int, *path: object) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=_derive_key(seed, *path)))


def _random_bits(gen: np.random.Generator, n: int) -> str:
    return "".join("1" if b else "0" for b in gen.integers(0, 2, size=n))


class _BudgetedOracle:
    """Counts calls; raising once the per-learning-phase budget is spent."""

    def __init__(self, fn: Callable, budget: int, name: str):
        self._fn = fn
        self.remaining = budget
        self.name = name

    def __call__(self, *args):
        if self.remaining <= 0:
            raise OracleBudgetExceeded(f"{self.name} oracle budget exhausted")
        self.remaining -= 1
        return self._fn(*args)


# ---------------------------------------------------------------------------
# game plumbing

def _validate(scenario: Scenario, trials: int, seed: int) -> None:
    if trials < MIN_TRIALS:
        raise InvalidConfig(f"trials must be >= {MIN_TRIALS}, got {trials}")
    if not isinstance(seed, int) or seed < 0:
        raise InvalidConfig("seed must be a non-negative integer")


def _leak_ids(scenario: Scenario, seed: int, level: AttackLevel, round_index: int) -> tuple[CoverId, ...]:
    """Fixed shuffled prefix of the library: what has leaked so far.  The
    shuffle depends only on the game seed, so later rounds extend earlier
    leaks instead of replacing them."""
    if level < AttackLevel.KCA:
        return ()
    size = scenario.leak_size(round_index)
    if size == 0:
        return ()
    gen = _generator(seed, "leak")
    order = gen.permutation(scenario.library.T)
    all_ids = scenario.library.ids()
    return tuple(all_ids[i] for i in order[:size])


def _leaked_key(scenario: Scenario, session_key: StegoKey) -> str | None:
    if scenario.key_leak is None:
        return None
    if scenario.key_leak == "full":
        return session_key.bits
    flipped = ("1" if session_key.bits[0] == "0" else "0") + session_key.bits[1:]
    return flipped


def _session_key(scenario: Scenario, seed: int, *path: object) -> StegoKey:
    l = capacity(scenario.library.T, scenario.N).l
    return keygen(l, SeededEntropy(_derive_key(seed, *path, "session-key")))


def _knowledge(
    scenario: Scenario,
    level: AttackLevel,
    session_key: StegoKey,
    leaked: tuple[CoverId, ...],
    observe_gen: np.random.Generator,
    adversary_gen: np.random.Generator,
) -> Knowledge:
    lib, n = scenario.library, scenario.N
    l = capacity(lib.T, n).l
    observed = tuple(
        embed(Message(_random_bits(observe_gen, l)), session_key, lib, n)
        for _ in range(scenario.observations)
    )
    embed_oracle = extract_oracle = None
    if level >= AttackLevel.CCA:
        embed_oracle = _BudgetedOracle(
            lambda bits: embed(Message(bits), session_key, lib, n),
            scenario.oracle_embed_budget,
            "embed",
        )
        extract_oracle = _BudgetedOracle(
            lambda seq: extract(seq, session_key, lib).bits,
            scenario.oracle_extract_budget,
            "extract",
        )
    return Knowledge(
        level=level,
        N=n,
        payload_bits=l,
        world_ids=scenario.world.ids(),
        observed=observed,
        leaked_ids=leaked,
        leaked_key=_leaked_key(scenario, session_key),
        embed_oracle=embed_oracle,
        extract_oracle=extract_oracle,
        rounds=scenario.rounds if level >= AttackLevel.ACCA else 1,
        rng=adversary_gen,
        content=scenario.content_for,
    )


def _natural_ids(scenario: Scenario, gen: np.random.Generator) -> tuple[CoverId, ...]:
    world = scenario.world.ids()
    picks = gen.choice(len(world), size=scenario.N, replace=False)
    return tuple(world[i] for i in picks)


def _detection_trial(
    scenario: Scenario,
    adversary: Adversary,
    level: AttackLevel,
    session_key: StegoKey,
    leaked: tuple[CoverId, ...],
    seed: int,
    trial: int,
) -> tuple[bool, bool]:
    """One learning phase plus one fair-coin challenge.

    Returns (success, label_was_stego).  Any adversary exception, budget
    overrun included, scores as a wrong answer for this trial.
    """
    harness = _generator(seed, "trial", trial, "harness")
    adv_gen = _generator(seed, "trial", trial, "adversary")
    l = capacity(scenario.library.T, scenario.N).l
    try:
        knowledge = _knowledge(scenario, level, session_key, leaked, harness, adv_gen)
        state = adversary.learn(knowledge)
    except Exception:
        state = None
        knowledge = None
    is_stego = bool(harness.integers(0, 2))
    if is_stego:
        m = Message(_random_bits(harness, l))
        challenge = Challenge(ids=embed(m, session_key, scenario.library, scenario.N).ids)
    else:
        challenge = Challenge(ids=_natural_ids(scenario, harness))
    if knowledge is None:
        return False, is_stego
    try:
        answer = adversary.guess(challenge, state)
    except Exception:
        answer = None
    expected = LABEL_STEGO if is_stego else LABEL_NATURAL
    return answer == expected, is_stego


def _binomial_verdict(successes: int, trials: int, alpha: float) -> tuple[float, float, str]:
    rate = successes / trials
    p_value = float(binomtest(successes, trials, 0.5, alternative="greater").pvalue)
    broken = p_value < alpha and rate > 0.5
    return rate, p_value, VERDICT_BROKEN if broken else VERDICT_RESISTS


def run_game(
    scenario: Scenario,
    adversary: Adversary,
    level: AttackLevel,
    trials: int,
    seed: int,
    alpha: float = DEFAULT_ALPHA,
    max_workers: int | None = None,
) -> GameResult:
    """Detection game: can the adversary tell stego sequences from natural
    traffic better than a fair coin?

    Per-trial seeding is counter-based, so the aggregate result does not
    depend on how trials are partitioned across workers.
    """
    _validate(scenario, trials, seed)
    session_key = _session_key(scenario, seed, "game")
    leaked = _leak_ids(scenario, seed, level, round_index=0)

    def block(indices: range) -> list[tuple[bool, bool]]:
        return [
            _detection_trial(scenario, adversary, level, session_key, leaked, seed, t)
            for t in indices
        ]

    blocks = [range(i, min(i + _TRIAL_BLOCK, trials)) for i in range(0, trials, _TRIAL_BLOCK)]
    workers = max_workers if max_workers is not None else default_workers()
    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = [r for chunk in pool.map(block, blocks) for r in chunk]
    else:
        outcomes = [r for chunk in map(block, blocks) for r in chunk]
    successes = sum(1 for ok, _ in outcomes if ok)
    stego_count = sum(1 for _, is_stego in outcomes if is_stego)
    rate, p_value, verdict = _binomial_verdict(successes, trials, alpha)
    return GameResult(
        level=level.name,
        kind="detection",
        trials=trials,
        successes=successes,
        success_rate=rate,
        p_value=p_value,
        alpha=alpha,
        verdict=verdict,
        seed=seed,
        stego_challenges=stego_count,
    )


def message_recovery_game(
    scenario: Scenario,
    adversary: Adversary,
    level: AttackLevel,
    trials: int,
    seed: int,
    alpha: float = DEFAULT_ALPHA,
) -> GameResult:
    """Recovery game: the adversary sees fresh stego sequences and guesses
    the hidden bits; judged on per-bit agreement over all sequences."""
    _validate(scenario, trials, seed)
    session_key = _session_key(scenario, seed, "game")
    leaked = _leak_ids(scenario, seed, level, round_index=0)
    l = capacity(scenario.library.T, scenario.N).l
    agreed = 0
    for trial in range(trials):
        harness = _generator(seed, "trial", trial, "harness")
        adv_gen = _generator(seed, "trial", trial, "adversary")
        try:
            knowledge = _knowledge(scenario, level, session_key, leaked, harness, adv_gen)
            state = adversary.learn(knowledge)
        except Exception:
            continue
        m = Message(_random_bits(harness, l))
        seq = embed(m, session_key, scenario.library, scenario.N)
        try:
            guess_bits = adversary.recover(seq, state)
            validate_bits(guess_bits)
        except Exception:
            continue
        if len(guess_bits) != l:
            continue
        agreed += sum(1 for a, b in zip(guess_bits, m.bits) if a == b)
    total_bits = trials * l
    rate, p_value, verdict = _binomial_verdict(agreed, total_bits, alpha)
    return GameResult(
        level=level.name,
        kind="recovery",
        trials=total_bits,
        successes=agreed,
        success_rate=rate,
        p_value=p_value,
        alpha=alpha,
        verdict=verdict,
        seed=seed,
        sequences=trials,
    )


def acca_loop(
    scenario: Scenario,
    adversary: Adversary,
    trials_per_round: int,
    seed: int,
    rounds: int | None = None,
    alpha: float = DEFAULT_ALPHA,
) -> list[GameResult]:
    """Adaptive game: repeated (learning, challenge-block) rounds.

    Adversary state persists across rounds and each round gets a fresh
    oracle budget, a fresh session key, and a leak grown per the scenario
    schedule.  Stops early once a round's verdict is broken.  Rounds run
    sequentially; adversary state makes them order-dependent by design.
    """
    _validate(scenario, trials_per_round, seed)
    n_rounds = rounds if rounds is not None else scenario.rounds
    if n_rounds < 1:
        raise InvalidConfig(f"rounds must be >= 1, got {n_rounds}")
    l = capacity(scenario.library.T, scenario.N).l
    results: list[GameResult] = []
    state: object | None = None
    for r in range(n_rounds):
        session_key = _session_key(scenario, seed, "round", r)
        leaked = _leak_ids(scenario, seed, AttackLevel.ACCA, round_index=r)
        observe_gen = _generator(seed, "round", r, "observe")
        adv_gen = _generator(seed, "round", r, "adversary")
        learn_failed = False
        try:
            knowledge = _knowledge(
                scenario, AttackLevel.ACCA, session_key, leaked, observe_gen, adv_gen
            )
            state = adversary.learn(knowledge, state)
        except Exception:
            learn_failed = True
        successes = 0
        stego_count = 0
        for trial in range(trials_per_round):
            harness = _generator(seed, "round", r, "trial", trial)
            is_stego = bool(harness.integers(0, 2))
            if is_stego:
                m = Message(_random_bits(harness, l))
                challenge = Challenge(ids=embed(m, session_key, scenario.library, scenario.N).ids)
                stego_count += 1
            else:
                challenge = Challenge(ids=_natural_ids(scenario, harness))
            if learn_failed:
                continue
            try:
                answer = adversary.guess(challenge, state)
            except Exception:
                answer = None
            if answer == (LABEL_STEGO if is_stego else LABEL_NATURAL):
                successes += 1
        rate, p_value, verdict = _binomial_verdict(successes, trials_per_round, alpha)
        results.append(
            GameResult(
                level=AttackLevel.ACCA.name,
                kind="detection",
                trials=trials_per_round,
                successes=successes,
                success_rate=rate,
                p_value=p_value,
                alpha=alpha,
                verdict=verdict,
                seed=seed,
                stego_challenges=stego_count,
                round_index=r,
            )
        )
        if verdict == VERDICT_BROKEN:
            break
    return results
