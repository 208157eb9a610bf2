"""Shared data model: probability vectors, result-page context, corpus bundle.

Everything downstream indexes resources by position in the lexicographically
sorted list of resource identifiers, so the bundle fixes that order once and
every vector/matrix row in the pipeline refers to it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: Absolute tolerance on "entries sum to one" checks.
SUM_TOL = 1e-9


class InputFormatError(ValueError):
    """A malformed line in an input file, reported as ``path:line: reason``."""

    def __init__(self, path, line_no: int, reason: str):
        self.path = str(path)
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"{self.path}:{line_no}: {reason}")


class ConvergenceWarning(UserWarning):
    """An iterative routine hit its iteration cap before reaching tolerance."""


@dataclass(frozen=True, eq=False)
class Distribution:
    """A probability vector over the resource index.

    ``values`` is a read-only float64 array with non-negative entries that
    sum to one within ``SUM_TOL``.
    """

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("distribution must be a non-empty 1-d vector")
        if not np.all(np.isfinite(v)):
            raise ValueError("distribution entries must be finite")
        if v.min() < 0.0:
            raise ValueError("distribution entries must be non-negative")
        total = float(v.sum())
        if abs(total - 1.0) > SUM_TOL:
            raise ValueError(f"distribution entries sum to {total!r}, not 1")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.values.size

    @staticmethod
    def uniform(n: int) -> "Distribution":
        if n < 1:
            raise ValueError("need at least one resource")
        return Distribution(np.full(n, 1.0 / n))

    @staticmethod
    def from_weights(weights) -> "Distribution":
        """Normalize a vector of non-negative weights; errors if all zero."""
        w = np.asarray(weights, dtype=np.float64)
        total = float(w.sum())
        if total <= 0.0:
            raise ValueError("weights sum to zero; cannot normalize")
        return Distribution(w / total)


@dataclass(frozen=True, eq=False)
class SerpContext:
    """A search-engine result page restricted to one query.

    ``docs`` lists document identifiers in rank order (rank of ``docs[i]``
    is ``i + 1``).  ``occurrences`` maps a resource index to the set of
    1-based ranks of the documents that mention it.
    """

    docs: tuple[str, ...]
    occurrences: dict[int, frozenset[int]]

    def __post_init__(self):
        size = len(self.docs)
        for idx, ranks in self.occurrences.items():
            if idx < 0:
                raise ValueError(f"negative resource index {idx} in occurrences")
            if not ranks:
                raise ValueError(f"resource index {idx} has an empty rank set")
            for r in ranks:
                if not 1 <= r <= size:
                    raise ValueError(
                        f"rank {r} for resource index {idx} outside 1..{size}"
                    )

    @property
    def size(self) -> int:
        """Number of documents on the page."""
        return len(self.docs)


@dataclass(frozen=True, eq=False)
class CorpusBundle:
    """Everything one ranking run needs, with a fixed resource order.

    ``resource_ids`` is sorted lexicographically and defines the index used
    by every vector and matrix row downstream.
    """

    resource_ids: tuple[str, ...]
    graph_edges: tuple[tuple[str, str, str], ...]
    resource_texts: dict[str, str]
    serp: SerpContext
    query_resources: frozenset[str]

    def __post_init__(self):
        if list(self.resource_ids) != sorted(set(self.resource_ids)):
            raise ValueError("resource_ids must be sorted and free of duplicates")

    @property
    def n(self) -> int:
        return len(self.resource_ids)

    @property
    def index(self) -> dict[str, int]:
        """Resource identifier -> position in ``resource_ids``."""
        # Computed lazily and cached on first use; the dataclass is frozen so
        # we stash it via object.__setattr__.
        cached = getattr(self, "_index_cache", None)
        if cached is None:
            cached = {rid: i for i, rid in enumerate(self.resource_ids)}
            object.__setattr__(self, "_index_cache", cached)
        return cached

    def query_indices(self) -> frozenset[int]:
        return frozenset(self.index[rid] for rid in self.query_resources)
