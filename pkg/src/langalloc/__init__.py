"""Budget-constrained source-language selection for cross-lingual transfer.

Submodules:
  similarity  embedding-gap language similarity and similarity matrices
  allocation  six budget-allocation strategies with cap-and-redistribute
  manifest    deterministic training/validation manifests
  stats       paired t-tests, effect sizes, win rates, utilization summaries
  simulator   synthetic transfer surrogate and brute-force oracle
  rng         pinned xoshiro256** randomness
  cli         command-line interface
"""

from .allocation import (
    STRATEGIES,
    AllocationEntry,
    AllocationVector,
    Candidate,
    SourcePool,
    StrategyConfig,
    allocate,
    build_pool,
)
from .manifest import DatasetIndex, Manifest, build_manifest, seed_sweep
from .similarity import (
    EmbeddingSet,
    SimilarityMatrix,
    build_similarity_matrix,
    cosine_gap,
)
from .simulator import UtilityModel, brute_force_best, evaluate, tournament
from .stats import (
    ComparisonReport,
    RunResult,
    bonferroni,
    cohens_d_paired,
    compare_strategies,
    paired_t_test,
    utilization_summary,
    win_rates,
)

__version__ = "0.1.0"
