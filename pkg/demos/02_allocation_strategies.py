"""
Six ways to spend a sentence budget
===================================

One pool, six allocation strategies. The best source is deliberately scarce
(1,810 sentences against a 5,000-sentence budget) to show the single-source
bottleneck: all-from-best leaves two thirds of the budget unused while every
multi-source strategy fills it.
"""

from langalloc import (
    STRATEGIES,
    Candidate,
    SourcePool,
    StrategyConfig,
    allocate,
)
from langalloc.similarity import SimilarityMatrix

import numpy as np

langs = ("amh", "kin", "swa", "twi", "yor")
inter = SimilarityMatrix(langs, np.where(np.eye(5), 1.0, 0.30))

pool = SourcePool(
    "hau",
    (
        Candidate("swa", 1810, 0.31),
        Candidate("yor", 8000, 0.22),
        Candidate("amh", 6000, 0.18),
        Candidate("kin", 5000, 0.16),
        Candidate("twi", 4000, 0.12),
    ),
    inter_source=inter,
)

budget = 5000
for strategy in STRATEGIES:
    cfg = StrategyConfig(strategy, budget=budget, k=3, alpha=0.5, seed=42)
    vec = allocate(pool, cfg)
    parts = ", ".join(f"{e.language}={e.amount}" for e in vec.entries)
    print(f"{strategy:20s} used {vec.used:5d}/{budget}  "
          f"(utilization {vec.utilization:.3f})  [{parts}]")

print("\nall-from-best at a doubled budget:")
vec = allocate(pool, StrategyConfig("all-from-best", budget=10000))
print(f"  used {vec.used}/10000 (utilization {vec.utilization:.3f}) — "
      "the bottleneck gets worse as the budget grows")
