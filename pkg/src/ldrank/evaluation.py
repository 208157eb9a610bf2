"""Graded-relevance evaluation: DCG, NDCG, and the strategy comparison.

The discounted gain of a ranked list counts the first grade at full value
and divides the grade at position i >= 2 by log2(i).  NDCG divides by the
gain of the ideal reordering of the same grades, so it stays in [0, 1].
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass

from .rank import STRATEGIES, PipelineParams, RankingResult, strategy

__all__ = [
    "RelevanceJudgments",
    "StrategyComparison",
    "dcg",
    "ndcg",
    "compare_strategies",
]

VALID_GRADES = (0, 1, 2, 3)


@dataclass(frozen=True, eq=False)
class RelevanceJudgments:
    """Item identifier -> relevance grade on the 0..3 scale."""

    grades: dict[str, int]

    def __post_init__(self):
        for item, grade in self.grades.items():
            if grade not in VALID_GRADES:
                raise ValueError(
                    f"grade for {item!r} must be one of {VALID_GRADES}, got {grade!r}"
                )


def dcg(grades, r: int) -> float:
    """Discounted cumulative gain of the first ``r`` positions.

    The grade at position 1 counts at full value; the grade at position
    i >= 2 is divided by log2(i).
    """
    if r < 1:
        raise ValueError(f"r must be at least 1, got {r}")
    grades = list(grades)
    if not grades:
        raise ValueError("grades list must not be empty")
    end = min(r, len(grades))
    total = float(grades[0])
    for i in range(2, end + 1):
        total += grades[i - 1] / math.log2(i)
    return total


def ndcg(ranking: RankingResult, judgments: RelevanceJudgments, r: int) -> float:
    """Normalized DCG at cutoff ``r`` for one ranking.

    Resources missing from the judgments count as grade 0 (warned once per
    call).  If even the ideal ordering has zero gain there is nothing to
    normalize by; that degenerate case scores 1.0, with a warning.
    """
    ranked_ids = ranking.ranked_ids()
    missing = [rid for rid in ranked_ids if rid not in judgments.grades]
    if missing:
        warnings.warn(
            f"{len(missing)} ranked resources have no judgment and count as grade 0 "
            f"(first: {missing[0]!r})"
        )
    grades = [judgments.grades.get(rid, 0) for rid in ranked_ids]
    ideal = sorted(grades, reverse=True)
    ideal_gain = dcg(ideal, r)
    if ideal_gain == 0.0:
        warnings.warn("ideal ranking has zero gain; returning 1.0")
        return 1.0
    return dcg(grades, r) / ideal_gain


@dataclass(frozen=True, eq=False)
class StrategyComparison:
    """Mean NDCG per strategy and cutoff, plus mean wall-clock seconds."""

    strategies: tuple[str, ...]
    cutoffs: tuple[int, ...]
    n_queries: int
    mean_ndcg: dict[str, dict[int, float]]
    mean_seconds: dict[str, float]
    per_query_ndcg: tuple[dict[str, dict[int, float]], ...]


def compare_strategies(
    bundles,
    judgments,
    cutoffs,
    params: PipelineParams | None = None,
) -> StrategyComparison:
    """Run every strategy over aligned (bundle, judgments) pairs.

    Each strategy runs once per bundle, timed in isolation with a monotonic
    clock, and is scored at every cutoff.  Means are arithmetic over the
    bundles; an empty bundle list yields an empty comparison.
    """
    bundles = list(bundles)
    judgments = list(judgments)
    if len(bundles) != len(judgments):
        raise ValueError(
            f"{len(bundles)} bundles but {len(judgments)} judgment sets"
        )
    cutoffs = tuple(int(r) for r in cutoffs)
    if any(r < 1 for r in cutoffs):
        raise ValueError("cutoffs must be positive")
    params = params or PipelineParams()

    if not bundles:
        return StrategyComparison(
            strategies=STRATEGIES,
            cutoffs=cutoffs,
            n_queries=0,
            mean_ndcg={},
            mean_seconds={},
            per_query_ndcg=(),
        )

    per_query: list[dict[str, dict[int, float]]] = []
    seconds: dict[str, list[float]] = {name: [] for name in STRATEGIES}
    for bundle, judged in zip(bundles, judgments):
        row: dict[str, dict[int, float]] = {}
        for name in STRATEGIES:
            start = time.perf_counter()
            result = strategy(name, bundle, params)
            seconds[name].append(time.perf_counter() - start)
            row[name] = {r: ndcg(result, judged, r) for r in cutoffs}
        per_query.append(row)

    n = len(bundles)
    mean_ndcg = {
        name: {r: sum(row[name][r] for row in per_query) / n for r in cutoffs}
        for name in STRATEGIES
    }
    mean_seconds = {name: sum(ts) / n for name, ts in seconds.items()}
    return StrategyComparison(
        strategies=STRATEGIES,
        cutoffs=cutoffs,
        n_queries=n,
        mean_ndcg=mean_ndcg,
        mean_seconds=mean_seconds,
        per_query_ndcg=tuple(per_query),
    )
