#!/usr/bin/env python3
"""Run the three headline security experiments and print their results.

1. A channel-statistics detector (pooled byte histograms, self-calibrated
   threshold) plays the detection game without any library knowledge.  It
   should stay at chance.
2. The same game with the full library leaked to a membership tester.  It
   should be broken outright, which is the point of keeping the library
   secret.
3. A keyless adversary plays the message-recovery game.  Per-bit agreement
   should sit at one half.

Each experiment prints a single JSON object, so the output is easy to diff
or collect.  Defaults reproduce the acceptance run exactly.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

sys.path.insert(0, "src")  # allow running from a fresh checkout

from stegogame.attackgame import (
    AttackLevel,
    KCAMembership,
    RandomGuesser,
    SCOAHistogram,
    message_recovery_game,
    run_game,
    synthetic_scenario,
)


def emit(tag: str, result) -> None:
    doc = {"experiment": tag, **dataclasses.asdict(result)}
    print(json.dumps(doc, sort_keys=True))


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0, help="offsets the per-experiment seeds")
    args = ap.parse_args()

    off = args.seed

    sc = synthetic_scenario(T=16, N=4, world_size=64, seed=101 + off)
    emit(
        "channel-statistics-detection",
        run_game(sc, SCOAHistogram(), AttackLevel.SCOA, trials=args.trials, seed=201 + off),
    )

    sc = synthetic_scenario(
        T=16, N=4, world_size=48, disjoint_world=True,
        seed=102 + off, leak_fraction=1.0, observations=0,
    )
    emit(
        "full-library-leak-detection",
        run_game(sc, KCAMembership(), AttackLevel.KCA, trials=args.trials, seed=202 + off),
    )

    sc = synthetic_scenario(T=6, N=4, world_size=18, seed=103 + off, observations=0)
    emit(
        "keyless-recovery",
        message_recovery_game(
            sc, RandomGuesser(), AttackLevel.SCOA, trials=args.trials, seed=203 + off
        ),
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
