"""Deterministic event schedules for the asynchronous algorithms.

A schedule is a finite list of ``(node set, phase)`` events replayed
cyclically, so it stands for an infinite sequence. It is fair when every node
receives every required phase at least once in each window of ``window``
consecutive events.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import UnfairSchedule

IMPROVE = "improve"
EVALUATE = "evaluate"
PHASES = (IMPROVE, EVALUATE)


@dataclass(frozen=True)
class Schedule:
    events: tuple  # ((frozenset[int], phase), ...)
    window: int | None = None

    def __post_init__(self):
        for nodes, phase in self.events:
            if phase not in PHASES:
                raise ValueError(f"unknown phase {phase!r}")
            if not nodes:
                raise ValueError("empty event")

    @property
    def fair_window(self) -> int:
        return self.window or len(self.events)

    def max_gap(self, x: int, phases: Sequence[str] | None = None) -> int | None:
        """Longest cyclic run of events before ``x`` is next hit; None if never hit."""
        hits = [i for i, (nodes, ph) in enumerate(self.events)
                if x in nodes and (phases is None or ph in phases)]
        if not hits:
            return None
        L = len(self.events)
        gaps = [(hits[(j + 1) % len(hits)] - hits[j]) % L or L for j in range(len(hits))]
        return max(gaps)

    def check_fair(self, n: int, required: Iterable[str] | None = None) -> None:
        """Raise UnfairSchedule unless every node gets each required phase once per window."""
        if not self.events:
            raise UnfairSchedule("empty schedule")
        W = self.fair_window
        groups = [None] if required is None else [(p,) for p in required]
        for x in range(1, n + 1):
            for phases in groups:
                gap = self.max_gap(x, phases)
                what = "any phase" if phases is None else phases[0]
                if gap is None:
                    raise UnfairSchedule(f"node {x} never receives {what}")
                if gap > W:
                    raise UnfairSchedule(f"node {x} waits {gap} > {W} events for {what}")

    @classmethod
    def of(cls, events: Iterable, window: int | None = None) -> "Schedule":
        return cls(tuple((frozenset(nodes), phase) for nodes, phase in events), window)

    @classmethod
    def synchronous(cls, n: int) -> "Schedule":
        return cls.of([(range(1, n + 1), IMPROVE)])

    @classmethod
    def in_order(cls, order: Sequence[int], phase: str = IMPROVE) -> "Schedule":
        """One single-node event per entry of ``order``."""
        return cls.of([((x,), phase) for x in order])

    @classmethod
    def round_robin(cls, n: int) -> "Schedule":
        return cls.in_order(range(1, n + 1))

    @classmethod
    def alternating(cls, blocks: Sequence[Iterable[int]]) -> "Schedule":
        """Improve every block, then evaluate every block."""
        blocks = [frozenset(b) for b in blocks]
        return cls.of([(b, IMPROVE) for b in blocks] + [(b, EVALUATE) for b in blocks])

    @classmethod
    def random_fair(
        cls,
        blocks: Sequence[Iterable[int]],
        seed: int,
        rounds: int = 3,
        evaluate_prob: float = 0.5,
    ) -> "Schedule":
        """``rounds`` shuffled passes over the blocks; each pass improves every block once
        and scatters random evaluation events in between."""
        rng = random.Random(seed)
        blocks = [frozenset(b) for b in blocks]
        events = []
        for _ in range(rounds):
            order = blocks[:]
            rng.shuffle(order)
            for b in order:
                while rng.random() < evaluate_prob:
                    events.append((rng.choice(blocks), EVALUATE))
                events.append((b, IMPROVE))
        return cls(tuple(events))


def singleton_blocks(n: int) -> list[frozenset]:
    return [frozenset((x,)) for x in range(1, n + 1)]


def partition_blocks(n: int, parts: int) -> list[frozenset]:
    """Split nodes 1..n into ``parts`` blocks by residue class."""
    parts = max(1, min(parts, n))
    return [frozenset(range(1 + i, n + 1, parts)) for i in range(parts)]
