"""Synthetic transfer-performance surrogate for desk-scale strategy studies.

The utility of an allocation is a saturating sum of per-source contributions
minus a redundancy discount for similar sources trained together:

    score = clamp( sum_i sim_i * (1 - exp(-u_i / tau))
                   - beta * sum_{i<j} sim(s_i, s_j) * min(u_i, u_j) / B
                   + noise, 0, 1 )

This is an invented stand-in for real transfer performance; it realizes the
two qualitative mechanisms of interest (diminishing returns per source and
redundancy among similar sources) while staying cheap enough to enumerate
exhaustively at toy scale.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

from .allocation import (
    AllocationEntry,
    AllocationVector,
    SourcePool,
    StrategyConfig,
    allocate,
    build_pool,
)
from .errors import InputError, ScaleError
from .rng import Xoshiro256StarStar, mix64
from .similarity import SimilarityMatrix
from .stats import RunResult

_GRID_LIMIT = 10_000_000


@dataclass(frozen=True)
class UtilityModel:
    target: str
    sim_to_target: dict[str, float]
    inter_source: SimilarityMatrix | None = None
    tau: float = 2000.0
    beta: float = 0.1
    noise_sd: float = 0.0
    seed: int = 0
    tag: str = "model"
    task: str = "synthetic"

    def __post_init__(self):
        if self.tau <= 0:
            raise InputError("tau must be positive")
        if self.beta < 0:
            raise InputError("beta must be >= 0")
        if self.noise_sd < 0:
            raise InputError("noise_sd must be >= 0")
        if self.beta > 0 and self.inter_source is None:
            raise InputError("beta > 0 requires an inter-source similarity matrix")


def evaluate(
    model: UtilityModel,
    allocation: AllocationVector,
    rng: Xoshiro256StarStar | None = None,
) -> float:
    """Score an allocation in [0, 1].

    Deterministic for a fixed (model, allocation, rng seed); with
    noise_sd > 0 and no rng supplied, noise is drawn from a generator seeded
    by model.seed, so repeated calls return the same value.
    """
    import math

    entries = [e for e in allocation.entries if e.amount >= 0]
    for e in entries:
        if e.language not in model.sim_to_target:
            raise InputError(f"language {e.language!r} unknown to the utility model")
    base = sum(
        model.sim_to_target[e.language] * (1.0 - math.exp(-e.amount / model.tau))
        for e in entries
    )
    if model.beta > 0:
        ordered = sorted(entries, key=lambda e: e.language)
        discount = 0.0
        for i in range(len(ordered)):
            for j in range(i + 1, len(ordered)):
                ei, ej = ordered[i], ordered[j]
                discount += (
                    model.inter_source.score(ei.language, ej.language)
                    * min(ei.amount, ej.amount)
                    / allocation.budget
                )
        base -= model.beta * discount
    score = min(1.0, max(0.0, base))
    if model.noise_sd > 0:
        if rng is None:
            rng = Xoshiro256StarStar(model.seed)
        score = min(1.0, max(0.0, score + rng.normal(0.0, model.noise_sd)))
    return score


def brute_force_best(
    model: UtilityModel, pool: SourcePool, budget: int, step: int = 1
) -> AllocationVector:
    """Exhaustive argmax of the noise-free utility over the step-grid of
    allocations with amounts at most availability and total at most budget.
    Ties resolve to the lexicographically smallest vector. Feasible only at
    toy scale; the grid size is checked up front."""
    import math

    if step < 1:
        raise InputError("step must be a positive integer")
    cands = sorted(pool.candidates, key=lambda c: c.language)
    grid = 1
    for c in cands:
        grid *= min(c.availability, budget) // step + 1
        if grid > _GRID_LIMIT:
            raise ScaleError(f"brute-force grid exceeds {_GRID_LIMIT} points")
    for c in cands:
        if c.language not in model.sim_to_target:
            raise InputError(f"language {c.language!r} unknown to the utility model")

    sims = [model.sim_to_target[c.language] for c in cands]
    inter = None
    if model.beta > 0:
        inter = [
            [model.inter_source.score(a.language, b.language) for b in cands]
            for a in cands
        ]

    best_score = -float("inf")
    best_amounts: tuple[int, ...] | None = None
    amounts = [0] * len(cands)

    def leaf_score() -> float:
        score = sum(
            s * (1.0 - math.exp(-a / model.tau)) for s, a in zip(sims, amounts)
        )
        if inter is not None:
            discount = 0.0
            for i in range(len(cands)):
                for j in range(i + 1, len(cands)):
                    discount += inter[i][j] * min(amounts[i], amounts[j]) / budget
            score -= model.beta * discount
        return min(1.0, max(0.0, score))

    def recurse(i: int, remaining: int):
        nonlocal best_score, best_amounts
        if i == len(cands):
            score = leaf_score()
            # enumeration is lexicographically ascending, so keeping only
            # strict improvements leaves the smallest tied vector in place
            if score > best_score:
                best_score = score
                best_amounts = tuple(amounts)
            return
        cap = min(cands[i].availability, remaining)
        for a in range(0, cap + 1, step):
            amounts[i] = a
            recurse(i + 1, remaining - a)
        amounts[i] = 0

    recurse(0, budget)
    cfg = StrategyConfig(strategy="brute-force", budget=budget)
    return AllocationVector(
        pool.target,
        tuple(AllocationEntry(c.language, a) for c, a in zip(cands, best_amounts)),
        budget,
        cfg,
    )


def tournament(
    models: list[UtilityModel],
    pools: list[SourcePool],
    cfgs: list[StrategyConfig],
    seeds: list[int],
) -> list[RunResult]:
    """Full cross-product of (model, pool, config, seed), in canonical order.

    The noise stream for each run is seeded from the model seed mixed with
    the run coordinates, so results are reproducible and independent of
    evaluation order.
    """
    if not models or not pools or not cfgs or not seeds:
        raise InputError("tournament grids must be non-empty")
    results = []
    for mi, model in enumerate(models):
        tag = model.tag if len({m.tag for m in models}) == len(models) else f"m{mi}"
        for pool in pools:
            for cfg in cfgs:
                for seed in seeds:
                    run_cfg = replace(cfg, seed=seed)
                    vec = allocate(pool, run_cfg)
                    rng = Xoshiro256StarStar(
                        mix64(
                            model.seed,
                            f"{tag}|{pool.target}|{cfg.strategy}|{cfg.budget}|{seed}",
                        )
                    )
                    score = evaluate(model, vec, rng=rng)
                    results.append(
                        RunResult(
                            task=model.task,
                            target=pool.target,
                            budget_level=str(cfg.budget),
                            model_tag=tag,
                            strategy=cfg.strategy,
                            seed=seed,
                            metric=score,
                            utilization=vec.utilization,
                        )
                    )
    results.sort(
        key=lambda r: (r.task, r.target, r.budget_level, r.model_tag,
                       r.strategy, r.seed)
    )
    return results


def load_tournament_spec(path: str):
    """Parse a tournament spec JSON into (models, pools, cfgs, seeds).

    Schema:
      pools:   [{target, sims: {lang: sim}, availability: {lang: n}}]
      models:  [{tag, task, tau, beta, noise_sd, seed, sims?, target?,
                 inter_source_ref?}]  (sims/target default to the first pool)
      configs: [{strategy, budget, k?, alpha?, batch_size?, saturation_c?}]
      seeds:   [int, ...]
    """
    with open(path, encoding="utf-8") as fh:
        spec = json.load(fh)
    for key in ("pools", "models", "configs", "seeds"):
        if key not in spec or not spec[key]:
            raise InputError(f"tournament spec missing non-empty {key!r}")

    pools = []
    for p in spec["pools"]:
        inter = None
        if p.get("inter_source_ref"):
            inter = SimilarityMatrix.load_csv(p["inter_source_ref"])
        pools.append(
            build_pool(
                p["target"],
                {k: int(v) for k, v in p["availability"].items()},
                matrix=inter,
                sims={k: float(v) for k, v in p["sims"].items()},
            )
        )

    default = spec["pools"][0]
    models = []
    for m in spec["models"]:
        inter = None
        if m.get("inter_source_ref"):
            inter = SimilarityMatrix.load_csv(m["inter_source_ref"])
        models.append(
            UtilityModel(
                target=m.get("target", default["target"]),
                sim_to_target={
                    k: float(v) for k, v in m.get("sims", default["sims"]).items()
                },
                inter_source=inter,
                tau=float(m.get("tau", 2000.0)),
                beta=float(m.get("beta", 0.1)) if inter is not None else 0.0,
                noise_sd=float(m.get("noise_sd", 0.0)),
                seed=int(m.get("seed", 0)),
                tag=str(m.get("tag", "model")),
                task=str(m.get("task", "synthetic")),
            )
        )

    cfgs = [
        StrategyConfig(
            strategy=c["strategy"],
            budget=int(c["budget"]),
            k=int(c.get("k", 5)),
            alpha=float(c.get("alpha", 0.5)),
            batch_size=int(c.get("batch_size", 500)),
            saturation_c=float(c.get("saturation_c", 1000.0)),
        )
        for c in spec["configs"]
    ]
    seeds = [int(s) for s in spec["seeds"]]
    return models, pools, cfgs, seeds
