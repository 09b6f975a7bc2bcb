"""Proportion-balanced epoch planning: sub-sample big pools, re-sample small ones."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field


@dataclass
class DataSource:
    name: str
    pool_size: int
    epoch_target: int
    tags: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.pool_size < 1:
            raise ValueError(f"{self.name}: pool_size must be >= 1")
        if self.epoch_target < 1:
            raise ValueError(f"{self.name}: epoch_target must be >= 1")


@dataclass
class SourcePlan:
    source: str
    picks: list[tuple[int, int]]  # (sample id, repetition count)

    @property
    def total(self) -> int:
        return sum(count for _, count in self.picks)

    @property
    def distinct(self) -> int:
        return len(self.picks)


@dataclass
class EpochPlan:
    seed: int
    sources: list[SourcePlan]

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "sources": [
                {
                    "name": sp.source,
                    "total": sp.total,
                    "distinct": sp.distinct,
                    "picks": [list(p) for p in sp.picks],
                }
                for sp in self.sources
            ],
        }


def plan_source(source: DataSource, rng: random.Random) -> SourcePlan:
    pool, target = source.pool_size, source.epoch_target
    if target <= pool:
        ids = sorted(rng.sample(range(pool), target))
        return SourcePlan(source.name, [(i, 1) for i in ids])
    base, extra = divmod(target, pool)
    bonus = set(rng.sample(range(pool), extra))
    return SourcePlan(
        source.name,
        [(i, base + (1 if i in bonus else 0)) for i in range(pool)],
    )


def plan_epoch(sources: list[DataSource], seed: int) -> EpochPlan:
    """Per-source sampling plan, deterministic for a given seed.

    target <= pool: uniform without replacement. target > pool: every item
    floor(target/pool) times plus a uniformly chosen remainder, so
    repetition counts differ by at most one.
    """
    plans = []
    for source in sources:
        rng = random.Random((seed, source.name).__repr__())
        plans.append(plan_source(source, rng))
    return EpochPlan(seed, plans)


def load_manifest(path, scale: float = 1.0) -> list[DataSource]:
    """Read a source manifest, dividing pool sizes and targets by ``scale``."""
    with open(path, encoding="utf-8") as f:
        entries = json.load(f)
    sources = []
    for entry in entries:
        sources.append(
            DataSource(
                name=entry["name"],
                pool_size=max(1, round(entry["pool_size"] / scale)),
                epoch_target=max(1, round(entry["epoch_target"] / scale)),
                tags=dict(entry.get("tags", {})),
            )
        )
    return sources
