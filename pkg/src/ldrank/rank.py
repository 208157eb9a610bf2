"""Biased random-walk ranking and the full LDRANK pipeline.

``power_rank`` runs the damped power iteration for the walk matrix
``alpha * S + (1 - alpha) * ones * teleport'`` without ever materializing
the dense matrix: each step costs O(edges + n).

``ldrank`` composes the whole pipeline: hit prior from the result page,
amplification set from the query plus the top hit, latent-drift prior from
the stressed SVD, consensus pooling of the three priors, and finally the
power iteration with the pooled belief used both as teleport vector and as
dangling-row fill.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .consensus import ConsensusResult, ExpertPool, consensual_pool
from .graph import ResourceGraph, build_graph, row_stochastic_view
from .lsa import build_text_matrix
from .priors import build_info_need, equi_prior, hit_prior, svd_prior
from .types import ConvergenceWarning, CorpusBundle, Distribution

__all__ = [
    "RankerConfig",
    "RankingResult",
    "PipelineParams",
    "PipelinePriors",
    "STRATEGIES",
    "power_rank",
    "compute_priors",
    "ldrank",
    "strategy",
]

STRATEGIES = ("EQUI", "HIT", "SVD", "LDRANK")


@dataclass(frozen=True)
class RankerConfig:
    """Power-iteration parameters.

    ``teleport`` is the restart distribution; ``dangling`` fills rows with
    no out-edges.  They are usually the same vector but stay independently
    configurable.
    """

    teleport: Distribution
    dangling: Distribution
    alpha: float = 0.7
    tol: float = 1e-10
    max_iters: int = 1000

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie strictly inside (0, 1), got {self.alpha}")
        if self.tol <= 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be at least 1, got {self.max_iters}")
        if len(self.teleport) != len(self.dangling):
            raise ValueError("teleport and dangling fills must have equal length")


@dataclass(frozen=True, eq=False)
class RankingResult:
    """Stationary scores plus the induced ordering.

    ``order`` holds resource indices sorted by descending score, ties broken
    by ascending resource identifier.
    """

    scores: Distribution
    order: np.ndarray
    resource_ids: tuple[str, ...]
    iterations: int
    converged: bool

    def __post_init__(self):
        n = len(self.scores)
        order = np.asarray(self.order, dtype=np.int64)
        if sorted(order.tolist()) != list(range(n)):
            raise ValueError("order must be a permutation of the resource indices")
        if len(self.resource_ids) != n:
            raise ValueError("one resource id required per score")
        order = order.copy()
        order.setflags(write=False)
        object.__setattr__(self, "order", order)

    def ranked_ids(self) -> list[str]:
        return [self.resource_ids[i] for i in self.order]


def power_rank(graph: ResourceGraph, config: RankerConfig) -> RankingResult:
    """Power iteration from the teleport vector to the stationary scores.

    Stops when the L1 difference between successive iterates drops below
    ``config.tol``; the walk matrix is an ``alpha``-contraction in L1, so
    the stationarity residual of the returned vector is below tolerance as
    well.  Hitting ``max_iters`` first returns the current iterate flagged
    (and warned) as non-converged.
    """
    if len(config.teleport) != graph.n:
        raise ValueError(
            f"teleport has length {len(config.teleport)}, graph has {graph.n} resources"
        )
    op = row_stochastic_view(graph, config.dangling)
    t = config.teleport.values
    restart = (1.0 - config.alpha) * t
    x = t.copy()
    iterations = 0
    converged = False
    while iterations < config.max_iters:
        x_next = config.alpha * op.apply(x) + restart
        diff = float(np.abs(x_next - x).sum())
        x = x_next
        iterations += 1
        if diff < config.tol:
            converged = True
            break
    if not converged:
        warnings.warn(
            f"power iteration still above tolerance after {iterations} iterations",
            ConvergenceWarning,
        )
    ids = np.array(graph.resource_ids)
    order = np.lexsort((ids, -x))
    return RankingResult(
        scores=Distribution(x),
        order=order,
        resource_ids=graph.resource_ids,
        iterations=iterations,
        converged=converged,
    )


@dataclass(frozen=True)
class PipelineParams:
    """Knobs for the full pipeline, with the recommended defaults."""

    alpha: float = 0.7
    ndim: int = 1
    stress: float = 1000.0
    tol: float = 1e-10
    bidirectional: bool = False
    damping: float = 0.5
    consensus_epsilon: float = 1e-9
    consensus_max_iters: int = 10000
    power_max_iters: int = 1000
    stopwords: frozenset[str] | None = None


@dataclass(frozen=True, eq=False)
class PipelinePriors:
    """The three expert priors plus their pooled consensus."""

    equi: Distribution
    hit: Distribution
    svd: Distribution
    consensus: ConsensusResult

    @property
    def final(self) -> Distribution:
        return self.consensus.distribution


def compute_priors(bundle: CorpusBundle, params: PipelineParams | None = None) -> PipelinePriors:
    """Run the prior-construction half of the pipeline."""
    params = params or PipelineParams()
    n = bundle.n
    equi = equi_prior(n)
    hit = hit_prior(bundle.serp, n)
    info_need = build_info_need(bundle.query_indices(), hit)
    matrix = build_text_matrix(bundle, params.stopwords)
    svd = svd_prior(matrix, info_need, k=params.ndim, stress=params.stress)
    pool = ExpertPool(
        experts=(hit, svd, equi),
        damping=params.damping,
        epsilon=params.consensus_epsilon,
        max_iters=params.consensus_max_iters,
    )
    return PipelinePriors(equi=equi, hit=hit, svd=svd, consensus=consensual_pool(pool))


def _run_walk(
    bundle: CorpusBundle, prior: Distribution, params: PipelineParams
) -> RankingResult:
    graph = build_graph(bundle, bidirectional=params.bidirectional)
    config = RankerConfig(
        teleport=prior,
        dangling=prior,
        alpha=params.alpha,
        tol=params.tol,
        max_iters=params.power_max_iters,
    )
    return power_rank(graph, config)


def ldrank(bundle: CorpusBundle, params: PipelineParams | None = None) -> RankingResult:
    """Full pipeline: pooled prior, then the biased walk it parameterizes."""
    params = params or PipelineParams()
    priors = compute_priors(bundle, params)
    return _run_walk(bundle, priors.final, params)


def strategy(
    name: str, bundle: CorpusBundle, params: PipelineParams | None = None
) -> RankingResult:
    """Rank with one of the named teleport strategies.

    EQUI and HIT skip the text analysis entirely; SVD runs the latent-drift
    prior on its own; LDRANK pools all three priors.  In every case the
    chosen prior serves as both teleport vector and dangling fill.
    """
    params = params or PipelineParams()
    if name == "EQUI":
        prior = equi_prior(bundle.n)
    elif name == "HIT":
        prior = hit_prior(bundle.serp, bundle.n)
    elif name == "SVD":
        hit = hit_prior(bundle.serp, bundle.n)
        info_need = build_info_need(bundle.query_indices(), hit)
        matrix = build_text_matrix(bundle, params.stopwords)
        prior = svd_prior(matrix, info_need, k=params.ndim, stress=params.stress)
    elif name == "LDRANK":
        return ldrank(bundle, params)
    else:
        raise ValueError(f"unknown strategy {name!r}; expected one of {STRATEGIES}")
    return _run_walk(bundle, prior, params)
