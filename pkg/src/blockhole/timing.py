"""Per-score timing of the triple kernels as the embedding size grows."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .models import Model, init_model

BENCH_NS = (50, 100, 150, 200)


@dataclass(frozen=True)
class TimingRow:
    model: str
    n: int
    dims: str
    scores: int
    ns_per_score: float


def bench_dims(kind: str, n: int, b: int = 2) -> dict:
    """Dims with ``n`` complex (BlockHolE) or real coordinates per entity."""
    if kind == "blockhole":
        if n % b:
            raise ValueError(f"n={n} is not a multiple of b={b}")
        return {"b": b, "m": n // b}
    return {"n": n}


def time_scores(
    model: Model,
    calls: int = 10_000,
    batch: int = 128,
    warmup: int = 2048,
    rounds: int = 5,
    seed: int = 0,
) -> float:
    """Median over ``rounds`` of the mean wall time per scored triple, in ns.

    Triples are drawn uniformly and scored ``batch`` at a time, so the
    interpreter's per-call cost is spread over many kernel evaluations.
    """
    if calls < 1 or batch < 1 or rounds < 1:
        raise ValueError("calls, batch and rounds must be positive")
    rng = np.random.default_rng(seed)
    n = max(calls, warmup)
    s = rng.integers(0, model.num_entities, n)
    r = rng.integers(0, model.num_relations, n)
    o = rng.integers(0, model.num_entities, n)
    for i in range(0, warmup, batch):
        model.score_batch(s[i : i + batch], r[i : i + batch], o[i : i + batch])
    per_round = []
    for _ in range(rounds):
        t0 = time.perf_counter()
        for i in range(0, calls, batch):
            model.score_batch(s[i : i + batch], r[i : i + batch], o[i : i + batch])
        per_round.append((time.perf_counter() - t0) / calls * 1e9)
    return float(np.median(per_round))


def scaling_table(
    kinds: Sequence[str] = ("blockhole", "rescal"),
    ns: Sequence[int] = BENCH_NS,
    b: int = 2,
    calls: int = 10_000,
    num_entities: int = 1000,
    num_relations: int = 20,
    seed: int = 0,
) -> list[TimingRow]:
    rows = []
    for kind in kinds:
        for n in ns:
            dims = bench_dims(kind, n, b)
            model = init_model(kind, num_entities, num_relations, dims, 0.1, seed)
            t = time_scores(model, calls, seed=seed)
            label = ",".join(f"{k}={v}" for k, v in sorted(dims.items()))
            rows.append(TimingRow(kind, n, label, calls, t))
    return rows


def ratio(rows: Sequence[TimingRow], kind: str, hi: int = 200, lo: int = 100) -> float:
    by_n = {row.n: row.ns_per_score for row in rows if row.model == kind}
    return by_n[hi] / by_n[lo]
