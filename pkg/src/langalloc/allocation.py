"""Budget-constrained allocation strategies.

Six strategies turn a pool of candidate source languages into an integer
allocation vector over a sentence budget B:

  all-from-best        entire budget on the single most similar source
  top-k-proportional   top K by similarity, shares proportional to similarity
  top-k-uniform        top K by similarity, equal shares
  random-k             K uniform-random sources, equal shares
  diversity-aware      greedy redundancy-penalized K, proportional shares
  greedy-marginal      joint batch allocation with diminishing returns

Fractional shares become integers by largest-remainder apportionment, and a
cap-and-redistribute fixed point guarantees the budget is met exactly
whenever the selected sources jointly hold enough data. Ties everywhere
break by higher similarity, then lexicographic language code, so outputs are
total-order deterministic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

from .errors import ConstraintError, DegenerateWeightsError, InputError
from .rng import Xoshiro256StarStar
from .similarity import SimilarityMatrix

STRATEGIES = (
    "all-from-best",
    "top-k-proportional",
    "top-k-uniform",
    "random-k",
    "diversity-aware",
    "greedy-marginal",
)


@dataclass(frozen=True)
class Candidate:
    language: str
    availability: int
    similarity: float


@dataclass(frozen=True)
class SourcePool:
    """Candidate sources for one target language.

    Candidates with no similarity data carry similarity exactly 0; they stay
    eligible for random selection but never win a similarity-informed argmax.
    """

    target: str
    candidates: tuple[Candidate, ...]
    inter_source: SimilarityMatrix | None = None

    def __post_init__(self):
        if not self.candidates:
            raise InputError("pool has no candidates")
        langs = [c.language for c in self.candidates]
        if len(set(langs)) != len(langs):
            raise InputError("duplicate candidate language codes")
        if self.target in langs:
            raise InputError(f"target {self.target!r} appears among candidates")
        for c in self.candidates:
            if c.availability < 0:
                raise InputError(f"{c.language}: negative availability")

    def informed(self) -> list[Candidate]:
        """Candidates eligible for similarity-informed selection (sim > 0)."""
        elig = [c for c in self.candidates if c.similarity > 0.0]
        if not elig:
            raise DegenerateWeightsError(
                f"all candidate similarities for target {self.target!r} are zero"
            )
        return elig


@dataclass(frozen=True)
class StrategyConfig:
    strategy: str
    budget: int
    k: int = 5
    alpha: float = 0.5
    seed: int = 0
    batch_size: int = 500        # greedy-marginal only
    saturation_c: float = 1000.0  # greedy-marginal only

    def __post_init__(self):
        if self.budget < 1:
            raise InputError("budget must be a positive integer")
        if self.k < 1:
            raise InputError("k must be a positive integer")
        if self.alpha < 0:
            raise InputError("alpha must be >= 0")
        if self.batch_size < 1:
            raise InputError("batch_size must be a positive integer")
        if self.saturation_c <= 0:
            raise InputError("saturation_c must be positive")


@dataclass(frozen=True)
class AllocationEntry:
    language: str
    amount: int


@dataclass(frozen=True)
class AllocationVector:
    """Integer sentences-per-source allocation with its configuration echo."""

    target: str
    entries: tuple[AllocationEntry, ...]
    budget: int
    strategy_config: StrategyConfig

    @property
    def used(self) -> int:
        return sum(e.amount for e in self.entries)

    @property
    def utilization(self) -> float:
        return self.used / self.budget

    def amount(self, language: str) -> int:
        for e in self.entries:
            if e.language == language:
                return e.amount
        return 0

    def to_json(self) -> str:
        obj = {
            "target": self.target,
            "strategy": self.strategy_config.strategy,
            "budget": self.budget,
            "k": self.strategy_config.k,
            "alpha": self.strategy_config.alpha,
            "seed": self.strategy_config.seed,
            "entries": [
                {"language": e.language, "amount": e.amount} for e in self.entries
            ],
            "used": self.used,
            "utilization": self.utilization,
        }
        return json.dumps(obj, sort_keys=True, indent=2)

    @staticmethod
    def from_json(text: str) -> "AllocationVector":
        obj = json.loads(text)
        cfg = StrategyConfig(
            strategy=obj["strategy"],
            budget=int(obj["budget"]),
            k=int(obj.get("k", 5)),
            alpha=float(obj.get("alpha", 0.5)),
            seed=int(obj.get("seed", 0)),
        )
        entries = tuple(
            AllocationEntry(e["language"], int(e["amount"])) for e in obj["entries"]
        )
        return AllocationVector(obj["target"], entries, int(obj["budget"]), cfg)


def _tiekey(similarity: float, language: str):
    # higher similarity first, then lexicographically smaller code
    return (-similarity, language)


def largest_remainder(
    weights: list[float], total: int, tiekeys: list
) -> list[int]:
    """Hamilton's method: integer shares proportional to weights, summing to
    exactly `total`. Remainder units go to the largest fractional parts,
    ties broken by the supplied keys."""
    wsum = sum(weights)
    if wsum <= 0 or any(w < 0 for w in weights):
        raise DegenerateWeightsError("apportionment weights must be nonnegative "
                                     "with positive sum")
    shares = [total * w / wsum for w in weights]
    base = [math.floor(s) for s in shares]
    remainder = total - sum(base)
    order = sorted(
        range(len(weights)), key=lambda i: (-(shares[i] - base[i]),) + tuple(tiekeys[i])
    )
    for i in order[:remainder]:
        base[i] += 1
    return base


def _cap_and_redistribute(
    amounts: list[int],
    availabilities: list[int],
    weights: list[float],
    tiekeys: list,
) -> list[int]:
    """Fixed-point loop: cap amounts at availability, re-apportion the
    remaining budget over uncapped sources by weight. Terminates in at most
    len(amounts) rounds since each round caps at least one new source."""
    amounts = list(amounts)
    n = len(amounts)
    target_total = sum(amounts)
    capped = [False] * n
    while True:
        over = [i for i in range(n) if not capped[i] and amounts[i] > availabilities[i]]
        if not over:
            break
        for i in over:
            amounts[i] = availabilities[i]
            capped[i] = True
        free = [i for i in range(n) if not capped[i]]
        if not free:
            break  # everything saturated; used = total availability
        remaining = target_total - sum(
            availabilities[i] for i in range(n) if capped[i]
        )
        w = [weights[i] for i in free]
        if sum(w) <= 0:
            w = [1.0] * len(free)  # degenerate weights: fall back to equal shares
        re = largest_remainder(w, remaining, [tiekeys[i] for i in free])
        for i, amt in zip(free, re):
            amounts[i] = amt
    return amounts


def cap_and_redistribute(raw: AllocationVector, pool: SourcePool) -> AllocationVector:
    """Public fixed-point wrapper over a raw allocation vector.

    Redistribution weights follow the originating strategy: similarity for
    proportional/diversity allocations, equal weights for uniform/random.
    """
    by_lang = {c.language: c for c in pool.candidates}
    uniform = raw.strategy_config.strategy in ("top-k-uniform", "random-k")
    amounts = [e.amount for e in raw.entries]
    avails, weights, tiekeys = [], [], []
    for e in raw.entries:
        if e.amount < 0:
            raise InputError(f"{e.language}: negative raw amount")
        c = by_lang.get(e.language)
        if c is None:
            raise InputError(f"{e.language}: not in pool")
        avails.append(c.availability)
        weights.append(1.0 if uniform else c.similarity)
        tiekeys.append(_tiekey(c.similarity, c.language))
    fixed = _cap_and_redistribute(amounts, avails, weights, tiekeys)
    entries = tuple(
        AllocationEntry(e.language, a) for e, a in zip(raw.entries, fixed)
    )
    return replace(raw, entries=entries)


def all_from_best(pool: SourcePool, cfg: StrategyConfig) -> AllocationVector:
    """Entire budget on the most similar source, with no redistribution.

    Single-source allocation may under-use the budget when the best source
    holds fewer sentences than B; utilization < 1 is the signal of interest.
    """
    elig = pool.informed()
    best = min(elig, key=lambda c: _tiekey(c.similarity, c.language))
    amount = min(cfg.budget, best.availability)
    entries = (AllocationEntry(best.language, amount),)
    return AllocationVector(pool.target, entries, cfg.budget, cfg)


def top_k_select(pool: SourcePool, k: int) -> list[str]:
    """The k most similar candidates, sorted by descending similarity."""
    if k > len(pool.candidates):
        raise InputError(
            f"k={k} exceeds candidate count {len(pool.candidates)}"
        )
    elig = pool.informed()
    if k > len(elig):
        raise DegenerateWeightsError(
            f"k={k} exceeds the {len(elig)} candidates with nonzero similarity"
        )
    ranked = sorted(elig, key=lambda c: _tiekey(c.similarity, c.language))
    return [c.language for c in ranked[:k]]


def random_k_select(pool: SourcePool, k: int, seed: int) -> list[str]:
    """k distinct candidates uniformly at random; zero-similarity candidates
    remain eligible. Deterministic in the seed."""
    if k > len(pool.candidates):
        raise InputError(
            f"k={k} exceeds candidate count {len(pool.candidates)}"
        )
    codes = sorted(c.language for c in pool.candidates)
    rng = Xoshiro256StarStar(seed)
    rng.shuffle(codes)
    return codes[:k]


def diversity_aware_select(pool: SourcePool, k: int, alpha: float) -> list[str]:
    """Greedy redundancy-penalized selection.

    The first pick is the plain similarity argmax; every later pick maximizes
    sim(s, target) - alpha * max over selected s' of sim(s, s'). With
    alpha = 0 this is exactly top-k selection.
    """
    if pool.inter_source is None:
        raise InputError("diversity-aware selection requires an inter-source "
                         "similarity matrix")
    if k > len(pool.candidates):
        raise InputError(
            f"k={k} exceeds candidate count {len(pool.candidates)}"
        )
    elig = pool.informed()
    if k > len(elig):
        raise DegenerateWeightsError(
            f"k={k} exceeds the {len(elig)} candidates with nonzero similarity"
        )
    remaining = {c.language: c for c in elig}
    first = min(elig, key=lambda c: _tiekey(c.similarity, c.language))
    selected = [first.language]
    del remaining[first.language]
    while len(selected) < k:
        def score(c: Candidate) -> float:
            penalty = max(pool.inter_source.score(c.language, s) for s in selected)
            return c.similarity - alpha * penalty

        pick = min(remaining.values(), key=lambda c: (-score(c), c.language))
        selected.append(pick.language)
        del remaining[pick.language]
    return selected


def _selected_candidates(pool: SourcePool, languages: list[str]) -> list[Candidate]:
    by_lang = {c.language: c for c in pool.candidates}
    return [by_lang[l] for l in languages]


def proportional_allocate(
    pool: SourcePool, selected: list[str], cfg: StrategyConfig
) -> AllocationVector:
    """Shares proportional to similarity, apportioned to integers and capped."""
    cands = _selected_candidates(pool, selected)
    if any(c.similarity < 0 for c in cands):
        raise InputError("negative similarity in selection")
    if all(c.similarity == 0 for c in cands):
        raise DegenerateWeightsError("all selected similarities are zero")
    weights = [c.similarity for c in cands]
    tiekeys = [_tiekey(c.similarity, c.language) for c in cands]
    amounts = largest_remainder(weights, cfg.budget, tiekeys)
    raw = AllocationVector(
        pool.target,
        tuple(AllocationEntry(c.language, a) for c, a in zip(cands, amounts)),
        cfg.budget,
        cfg,
    )
    return cap_and_redistribute(raw, pool)


def uniform_allocate(
    pool: SourcePool, selected: list[str], cfg: StrategyConfig
) -> AllocationVector:
    """Equal split; the remainder goes one sentence at a time down the
    selection order, then cap-and-redistribute with equal weights."""
    if not selected:
        raise InputError("empty selection")
    cands = _selected_candidates(pool, selected)
    k = len(cands)
    base, rem = divmod(cfg.budget, k)
    amounts = [base + (1 if i < rem else 0) for i in range(k)]
    raw = AllocationVector(
        pool.target,
        tuple(AllocationEntry(c.language, a) for c, a in zip(cands, amounts)),
        cfg.budget,
        cfg,
    )
    return cap_and_redistribute(raw, pool)


def greedy_marginal_allocate(pool: SourcePool, cfg: StrategyConfig) -> AllocationVector:
    """Joint selection-and-allocation by diminishing-returns batches.

    Each batch of cfg.batch_size sentences (final batch truncated to the
    remaining budget, and any batch truncated to the source's spare
    availability) goes to the source maximizing
    sim(s, target) / (1 + a_s / saturation_c). There is no K limit.
    """
    if cfg.budget < cfg.batch_size:
        raise InputError(
            f"budget {cfg.budget} is smaller than batch_size {cfg.batch_size}"
        )
    elig = pool.informed()
    elig = [c for c in elig if c.availability > 0]
    if not elig:
        raise InputError("no eligible source has any available data")
    alloc = {c.language: 0 for c in elig}
    remaining = cfg.budget
    while remaining > 0:
        spare = [c for c in elig if alloc[c.language] < c.availability]
        if not spare:
            break
        best = min(
            spare,
            key=lambda c: (
                -c.similarity / (1.0 + alloc[c.language] / cfg.saturation_c),
                c.language,
            ),
        )
        batch = min(cfg.batch_size, remaining, best.availability - alloc[best.language])
        alloc[best.language] += batch
        remaining -= batch
    entries = tuple(
        AllocationEntry(c.language, alloc[c.language])
        for c in sorted(elig, key=lambda c: _tiekey(c.similarity, c.language))
        if alloc[c.language] > 0
    )
    return AllocationVector(pool.target, entries, cfg.budget, cfg)


def allocate(pool: SourcePool, cfg: StrategyConfig) -> AllocationVector:
    """Dispatch to the configured strategy."""
    s = cfg.strategy
    if s == "all-from-best":
        return all_from_best(pool, cfg)
    if s == "top-k-proportional":
        return proportional_allocate(pool, top_k_select(pool, cfg.k), cfg)
    if s == "top-k-uniform":
        return uniform_allocate(pool, top_k_select(pool, cfg.k), cfg)
    if s == "random-k":
        return uniform_allocate(pool, random_k_select(pool, cfg.k, cfg.seed), cfg)
    if s == "diversity-aware":
        return proportional_allocate(
            pool, diversity_aware_select(pool, cfg.k, cfg.alpha), cfg
        )
    if s == "greedy-marginal":
        return greedy_marginal_allocate(pool, cfg)
    raise InputError(f"unknown strategy {s!r}; expected one of {', '.join(STRATEGIES)}")


def load_availability_csv(path: str) -> dict[str, int]:
    """Parse `language,count` CSV (header optional, comments ignored)."""
    out: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for ln in fh:
            ln = ln.strip()
            if not ln or ln.startswith("#"):
                continue
            cells = ln.split(",")
            if len(cells) != 2:
                raise InputError(f"{path}: expected 'language,count' rows")
            lang, count = cells[0].strip(), cells[1].strip()
            if lang == "language" and count == "count":
                continue  # header
            try:
                n = int(count)
            except ValueError:
                raise InputError(f"{path}: non-integer count for {lang!r}")
            if lang in out:
                raise InputError(f"{path}: duplicate language {lang!r}")
            out[lang] = n
    if not out:
        raise InputError(f"{path}: no availability rows")
    return out


def build_pool(
    target: str,
    availability: dict[str, int],
    matrix: SimilarityMatrix | None = None,
    sims: dict[str, float] | None = None,
) -> SourcePool:
    """Assemble a pool from availability counts plus similarity data.

    Similarities come from an explicit mapping or a similarity matrix row;
    candidates missing from the similarity data get exactly 0.
    """
    candidates = []
    for lang in sorted(availability):
        if lang == target:
            continue
        if sims is not None:
            sim = float(sims.get(lang, 0.0))
        elif matrix is not None and lang in matrix and target in matrix:
            sim = matrix.score(lang, target)
        else:
            sim = 0.0
        candidates.append(Candidate(lang, availability[lang], sim))
    return SourcePool(target, tuple(candidates), inter_source=matrix)
