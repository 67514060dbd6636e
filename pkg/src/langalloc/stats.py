"""Paired statistical comparison of strategy runs.

Paired t-tests with 95% confidence intervals, Bonferroni correction and
paired Cohen's d, plus win-rate and budget-utilization summaries over
per-seed run records. The Student-t CDF is evaluated through a
continued-fraction regularized incomplete beta so p-values are reproducible
to printed precision without an external statistics library.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

from .errors import CoverageError, DegenerateVarianceError, InputError

_EPS = 1e-14
_MAX_CF_ITER = 400


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the regularized incomplete beta (modified
    Lentz's method)."""
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < 1e-300:
        d = 1e-300
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_CF_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < 1e-300:
            d = 1e-300
        c = 1.0 + aa / c
        if abs(c) < 1e-300:
            c = 1e-300
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < 1e-300:
            d = 1e-300
        c = 1.0 + aa / c
        if abs(c) < 1e-300:
            c = 1e-300
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    if not 0.0 <= x <= 1.0:
        raise InputError("x must lie in [0, 1]")
    if x == 0.0 or x == 1.0:
        return x
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_sf(t: float, df: float) -> float:
    """Upper-tail probability P(T_df > t)."""
    if df <= 0:
        raise InputError("df must be positive")
    x = df / (df + t * t)
    p = 0.5 * betainc(df / 2.0, 0.5, x)
    return p if t >= 0 else 1.0 - p


def student_t_cdf(t: float, df: float) -> float:
    return 1.0 - student_t_sf(t, df)


@functools.lru_cache(maxsize=4096)
def student_t_ppf(q: float, df: float) -> float:
    """Quantile of the Student-t distribution by bisection on the CDF."""
    if not 0.0 < q < 1.0:
        raise InputError("q must lie in (0, 1)")
    lo, hi = -1.0, 1.0
    while student_t_cdf(lo, df) > q:
        lo *= 2.0
    while student_t_cdf(hi, df) < q:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if student_t_cdf(mid, df) < q:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _mean(xs) -> float:
    return sum(xs) / len(xs)


def _sample_sd(xs) -> float:
    m = _mean(xs)
    return math.sqrt(sum((x - m) ** 2 for x in xs) / (len(xs) - 1))


@dataclass(frozen=True)
class TTestResult:
    delta: float
    ci_low: float
    ci_high: float
    p: float
    t_statistic: float
    df: int
    degenerate: bool = False  # zero variance of differences


def paired_t_test(a: list[float], b: list[float]) -> TTestResult:
    """Two-sided paired t-test on positionally paired samples.

    Differences are b - a, so a positive delta favors the second input.
    Zero-variance differences yield a flagged result with NaN p rather than
    a silent zero.
    """
    if len(a) != len(b):
        raise InputError("paired samples must have equal length")
    n = len(a)
    if n < 2:
        raise InputError("need at least 2 pairs")
    diffs = [y - x for x, y in zip(a, b)]
    delta = _mean(diffs)
    sd = _sample_sd(diffs)
    df = n - 1
    if sd == 0.0:
        return TTestResult(delta, delta, delta, float("nan"), float("nan"),
                           df, degenerate=True)
    se = sd / math.sqrt(n)
    t = delta / se
    p = 2.0 * student_t_sf(abs(t), df)
    tcrit = student_t_ppf(0.975, df)
    return TTestResult(delta, delta - tcrit * se, delta + tcrit * se, p, t, df)


def cohens_d_paired(a: list[float], b: list[float]) -> float:
    """Mean of paired differences over their sample standard deviation."""
    if len(a) != len(b):
        raise InputError("paired samples must have equal length")
    if len(a) < 2:
        raise InputError("need at least 2 pairs")
    diffs = [y - x for x, y in zip(a, b)]
    sd = _sample_sd(diffs)
    if sd == 0.0:
        raise DegenerateVarianceError("paired differences have zero variance")
    return _mean(diffs) / sd


def bonferroni(p: float, m: int) -> float:
    if not 0.0 <= p <= 1.0:
        raise InputError("p must lie in [0, 1]")
    if m < 1:
        raise InputError("family size must be >= 1")
    return min(1.0, m * p)


@dataclass(frozen=True)
class RunResult:
    """One per-seed experimental run."""

    task: str
    target: str
    budget_level: str
    model_tag: str
    strategy: str
    seed: int
    metric: float
    utilization: float

    def __post_init__(self):
        if not 0.0 <= self.metric <= 1.0:
            raise InputError(f"metric {self.metric} outside [0, 1]")
        if not 0.0 <= self.utilization <= 1.0:
            raise InputError(f"utilization {self.utilization} outside [0, 1]")

    def condition(self) -> tuple:
        return (self.task, self.target, self.budget_level, self.model_tag, self.seed)


def win_rates(results: list[RunResult], strict: bool = False) -> dict[str, float]:
    """Fraction of seed-level conditions each strategy wins.

    Exact metric ties split fractionally among the tied strategies (default)
    or count for nobody in strict mode. Every condition must contain every
    strategy.
    """
    strategies = sorted({r.strategy for r in results})
    conditions: dict[tuple, dict[str, float]] = {}
    for r in results:
        cond = conditions.setdefault(r.condition(), {})
        if r.strategy in cond:
            raise InputError(f"duplicate run for {r.condition()} / {r.strategy}")
        cond[r.strategy] = r.metric
    for key, cond in conditions.items():
        missing = set(strategies) - set(cond)
        if missing:
            raise CoverageError(
                f"condition {key} is missing strategies: {sorted(missing)}"
            )
    rates = {s: 0.0 for s in strategies}
    for cond in conditions.values():
        best = max(cond.values())
        winners = [s for s, v in cond.items() if v == best]
        if strict and len(winners) > 1:
            continue
        for s in winners:
            rates[s] += 1.0 / len(winners)
    n = len(conditions)
    return {s: v / n for s, v in rates.items()}


def utilization_summary(results: list[RunResult]) -> dict[str, dict[str, float]]:
    """Mean/min/max budget utilization per strategy."""
    if not results:
        raise InputError("empty result set")
    groups: dict[str, list[float]] = {}
    for r in results:
        groups.setdefault(r.strategy, []).append(r.utilization)
    return {
        s: {"mean": _mean(us), "min": min(us), "max": max(us)}
        for s, us in sorted(groups.items())
    }


@dataclass(frozen=True)
class ComparisonReport:
    comparison: str
    condition: str
    n: int
    delta: float
    ci_low: float
    ci_high: float
    p: float
    p_adjusted: float
    d: float
    family_size: int
    degenerate: bool = False


def compare_strategies(
    results: list[RunResult], a: str, b: str, family_size: int = 1
) -> list[ComparisonReport]:
    """Paired comparison of two strategies, one report row per
    (task, budget, model) condition, paired over (target, seed)."""
    groups: dict[tuple, dict[tuple, dict[str, float]]] = {}
    for r in results:
        if r.strategy not in (a, b):
            continue
        grp = groups.setdefault((r.task, r.budget_level, r.model_tag), {})
        pair = grp.setdefault((r.target, r.seed), {})
        pair[r.strategy] = r.metric
    if not groups:
        raise CoverageError(f"no runs found for strategies {a!r} / {b!r}")
    reports = []
    for key in sorted(groups):
        pairs = groups[key]
        xs, ys = [], []
        for pkey in sorted(pairs):
            pair = pairs[pkey]
            if a not in pair or b not in pair:
                raise CoverageError(
                    f"condition {key} pair {pkey} is missing one of {a!r}, {b!r}"
                )
            xs.append(pair[a])
            ys.append(pair[b])
        tt = paired_t_test(xs, ys)
        if tt.degenerate:
            d = float("nan")
            p_adj = float("nan")
        else:
            d = cohens_d_paired(xs, ys)
            p_adj = bonferroni(tt.p, family_size)
        reports.append(
            ComparisonReport(
                comparison=f"{a} vs {b}",
                condition="-".join(str(k) for k in key),
                n=len(xs),
                delta=tt.delta,
                ci_low=tt.ci_low,
                ci_high=tt.ci_high,
                p=tt.p,
                p_adjusted=p_adj,
                d=d,
                family_size=family_size,
                degenerate=tt.degenerate,
            )
        )
    return reports


def significance_stars(p: float) -> str:
    if math.isnan(p):
        return ""
    if p < 0.001:
        return "***"
    if p < 0.01:
        return "**"
    if p < 0.05:
        return "*"
    return ""


RESULTS_HEADER = "task,target,budget,model,strategy,seed,metric,utilization"
REPORT_HEADER = "comparison,condition,n,delta,ci_low,ci_high,p,p_adjusted,d"


def load_results_csv(path: str) -> list[RunResult]:
    results = []
    with open(path, encoding="utf-8") as fh:
        for ln in fh:
            ln = ln.strip()
            if not ln or ln.startswith("#") or ln == RESULTS_HEADER:
                continue
            cells = ln.split(",")
            if len(cells) != 8:
                raise InputError(f"{path}: expected 8 columns, got {len(cells)}")
            results.append(
                RunResult(
                    task=cells[0],
                    target=cells[1],
                    budget_level=cells[2],
                    model_tag=cells[3],
                    strategy=cells[4],
                    seed=int(cells[5]),
                    metric=float(cells[6]),
                    utilization=float(cells[7]),
                )
            )
    if not results:
        raise InputError(f"{path}: no result rows")
    return results


def results_to_csv(results: list[RunResult]) -> str:
    lines = [RESULTS_HEADER]
    for r in results:
        lines.append(
            f"{r.task},{r.target},{r.budget_level},{r.model_tag},{r.strategy},"
            f"{r.seed},{r.metric:.17g},{r.utilization:.17g}"
        )
    return "\n".join(lines) + "\n"


def report_to_csv(reports: list[ComparisonReport]) -> str:
    lines = [REPORT_HEADER]
    for r in reports:
        lines.append(
            f"{r.comparison},{r.condition},{r.n},{r.delta:.17g},{r.ci_low:.17g},"
            f"{r.ci_high:.17g},{r.p:.17g},{r.p_adjusted:.17g},{r.d:.17g}"
        )
    return "\n".join(lines) + "\n"


def report_to_text(reports: list[ComparisonReport]) -> str:
    """Human-readable rendering with significance stars
    (* p<.05, ** p<.01, *** p<.001)."""
    lines = []
    for r in reports:
        stars = significance_stars(r.p)
        note = " [zero-variance differences]" if r.degenerate else ""
        lines.append(
            f"{r.comparison} | {r.condition} | n={r.n} | "
            f"delta={r.delta:+.3f} | 95% CI [{r.ci_low:+.3f}, {r.ci_high:+.3f}] | "
            f"p={r.p:.3f}{stars} | p_adj={r.p_adjusted:.3f} (m={r.family_size}) | "
            f"d={r.d:+.2f}{note}"
        )
    return "\n".join(lines) + "\n"
