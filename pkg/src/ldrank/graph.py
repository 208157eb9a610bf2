"""Resource graph extraction and the row-stochastic transition operator.

The walk structure ignores predicates entirely: an edge is a distinct
(subject, object) pair.  Dangling rows (no out-edges) are completed with a
caller-supplied fill distribution at application time; the n-by-n stochastic
matrix itself is never materialized densely.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .types import CorpusBundle, Distribution

__all__ = ["ResourceGraph", "TransitionOperator", "build_graph", "row_stochastic_view"]


@dataclass(frozen=True, eq=False)
class ResourceGraph:
    """Adjacency over resource indices: one sorted successor array per node."""

    resource_ids: tuple[str, ...]
    out_edges: tuple[np.ndarray, ...]

    def __post_init__(self):
        n = len(self.resource_ids)
        if len(self.out_edges) != n:
            raise ValueError("one successor array required per resource")
        for i, succ in enumerate(self.out_edges):
            if succ.size and (succ.min() < 0 or succ.max() >= n):
                raise ValueError(f"successor index out of range for node {i}")
            if succ.size > 1 and np.any(np.diff(succ) <= 0):
                raise ValueError(f"successors of node {i} must be sorted and unique")

    @property
    def n(self) -> int:
        return len(self.resource_ids)

    @property
    def edge_count(self) -> int:
        return int(sum(s.size for s in self.out_edges))


def build_graph(bundle: CorpusBundle, bidirectional: bool = False) -> ResourceGraph:
    """Project the triples of a bundle onto resource indices.

    Parallel edges collapse (multiple predicates between the same pair count
    once) and self-loops are kept as they appear in the input.  With
    ``bidirectional=True`` every edge is mirrored, which makes the adjacency
    symmetric.
    """
    index = bundle.index
    pairs = set()
    for s, _p, o in bundle.graph_edges:
        i, j = index[s], index[o]
        pairs.add((i, j))
        if bidirectional:
            pairs.add((j, i))
    successors: list[list[int]] = [[] for _ in range(bundle.n)]
    for i, j in pairs:
        successors[i].append(j)
    out_edges = tuple(
        np.array(sorted(js), dtype=np.int64) for js in successors
    )
    return ResourceGraph(resource_ids=bundle.resource_ids, out_edges=out_edges)


class TransitionOperator:
    """Matrix-free view of the dangling-completed row-stochastic matrix.

    ``apply(x)`` computes ``x @ S`` where row i of S is uniform over the
    successors of i, or the fill distribution if i has none.  Cost is
    O(edges + n) per application.
    """

    def __init__(self, graph: ResourceGraph, dangling_fill: Distribution):
        if len(dangling_fill) != graph.n:
            raise ValueError(
                f"fill distribution has length {len(dangling_fill)}, "
                f"graph has {graph.n} resources"
            )
        n = graph.n
        rows, cols, data = [], [], []
        dangling = np.zeros(n, dtype=bool)
        for i, succ in enumerate(graph.out_edges):
            if succ.size == 0:
                dangling[i] = True
                continue
            w = 1.0 / succ.size
            rows.extend([i] * succ.size)
            cols.extend(succ.tolist())
            data.extend([w] * succ.size)
        self._matrix = sp.csr_array(
            (np.array(data), (np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64))),
            shape=(n, n),
        )
        self._dangling_mask = dangling
        self._fill = dangling_fill.values
        self.n = n

    @property
    def dangling_mask(self) -> np.ndarray:
        return self._dangling_mask

    def apply(self, x: np.ndarray) -> np.ndarray:
        if x.shape != (self.n,):
            raise ValueError(f"expected vector of length {self.n}, got {x.shape}")
        out = x @ self._matrix
        mass = float(x[self._dangling_mask].sum())
        if mass:
            out = out + mass * self._fill
        return out


def row_stochastic_view(graph: ResourceGraph, dangling_fill: Distribution) -> TransitionOperator:
    """The transition operator for ``graph`` with dangling rows filled."""
    return TransitionOperator(graph, dangling_fill)
