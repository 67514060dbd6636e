"""
Synthetic strategy tournament with paired statistics
====================================================

Run a cross-product tournament on the scarce-best-source simulator, then
summarize it the way an experiment table would: win rates, utilization, and
a paired t-test with Bonferroni correction and Cohen's d.
"""

import numpy as np

from langalloc import (
    Candidate,
    SourcePool,
    StrategyConfig,
    UtilityModel,
    tournament,
)
from langalloc.similarity import SimilarityMatrix
from langalloc.stats import (
    compare_strategies,
    report_to_text,
    utilization_summary,
    win_rates,
)

langs = ("aa", "bb", "cc", "dd", "ee", "ff")
sims = {"aa": 0.9, "bb": 0.55, "cc": 0.5, "dd": 0.45, "ee": 0.4, "ff": 0.35}
avail = {"aa": 1810, "bb": 4000, "cc": 4000, "dd": 4000, "ee": 4000,
         "ff": 4000}
inter = SimilarityMatrix(langs, np.where(np.eye(6), 1.0, 0.30))

pools = [
    SourcePool(t, tuple(Candidate(l, avail[l], sims[l]) for l in langs),
               inter_source=inter)
    for t in ("t1", "t2", "t3")
]
models = [
    UtilityModel(p.target, sims, inter_source=inter, tau=2000.0, beta=0.1,
                 noise_sd=0.02, seed=7 + i, tag=f"m{i}")
    for i, p in enumerate(pools)
]
cfgs = [
    StrategyConfig(s, budget=5000, k=5)
    for s in ("all-from-best", "top-k-proportional", "diversity-aware",
              "random-k")
]

results = tournament(models, pools, cfgs, seeds=[42, 43, 44])
print(f"tournament: {len(results)} runs "
      f"({len(models)} models x {len(pools)} pools x {len(cfgs)} strategies "
      "x 3 seeds)")

print("\nwin rates (exact ties split fractionally):")
for strategy, rate in sorted(win_rates(results).items(), key=lambda kv: -kv[1]):
    print(f"  {strategy:20s} {rate:.3f}")

print("\nbudget utilization:")
for strategy, summary in utilization_summary(results).items():
    print(f"  {strategy:20s} mean {summary['mean']:.2f} "
          f"range [{summary['min']:.2f}, {summary['max']:.2f}]")

print("\npaired comparison (positive delta favors the second strategy):")
reports = compare_strategies(results, "all-from-best", "top-k-proportional",
                             family_size=len(cfgs))
print(report_to_text(reports), end="")
