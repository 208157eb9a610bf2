"""Latent text analysis: stem-count matrix and truncated SVD coordinates.

Texts are tokenized (lowercase, split on non-alphanumeric runs), filtered
against a stopword list plus a minimum length of 2, and stemmed.  The counts
form a sparse resources-by-stems matrix in compressed-column storage; its
rank-k SVD gives every resource a k-dimensional coordinate vector whose
length measures how much of the resource's text mass survives the
truncation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources as importlib_resources

import numpy as np
import scipy.io
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg

from .stemmer import stem
from .types import CorpusBundle

__all__ = [
    "ResourceTextMatrix",
    "SvdResult",
    "ConvergenceError",
    "tokenize",
    "load_default_stopwords",
    "build_text_matrix",
    "sparse_svd",
    "resource_coordinates",
    "dump_matrix_market",
]

MIN_TOKEN_LENGTH = 2

# Alphanumeric runs; underscores separate tokens like any other punctuation.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

_stopwords_cache: frozenset[str] | None = None


class ConvergenceError(RuntimeError):
    """The iterative SVD ran out of iterations before converging."""


def load_default_stopwords() -> frozenset[str]:
    """The packaged English stopword list (one lowercase word per line)."""
    global _stopwords_cache
    if _stopwords_cache is None:
        text = (
            importlib_resources.files("ldrank")
            .joinpath("data/stopwords_en.txt")
            .read_text(encoding="utf-8")
        )
        _stopwords_cache = frozenset(
            w for w in (line.strip() for line in text.splitlines()) if w
        )
    return _stopwords_cache


def tokenize(text: str, stopwords: frozenset[str] | None = None) -> list[str]:
    """Lowercase, split, drop stopwords and short tokens, then stem.

    Stopwords and the length cutoff apply to the raw lowercased token,
    before stemming.
    """
    if stopwords is None:
        stopwords = load_default_stopwords()
    out = []
    for token in _TOKEN_RE.findall(text.lower()):
        if len(token) < MIN_TOKEN_LENGTH or token in stopwords:
            continue
        out.append(stem(token))
    return out


@dataclass(frozen=True, eq=False)
class ResourceTextMatrix:
    """Sparse stem counts, resources as rows, stems as columns.

    ``counts`` is compressed-column (CSC) with strictly positive entries;
    ``stem_vocab`` maps each stem to its column, in lexicographic order.
    """

    counts: sp.csc_array
    stem_vocab: dict[str, int]

    def __post_init__(self):
        if self.counts.shape[1] != len(self.stem_vocab):
            raise ValueError("vocabulary size disagrees with matrix width")
        if self.counts.nnz and self.counts.data.min() <= 0:
            raise ValueError("stored counts must be strictly positive")

    @property
    def n_resources(self) -> int:
        return self.counts.shape[0]

    @property
    def n_stems(self) -> int:
        return self.counts.shape[1]


def build_text_matrix(
    bundle: CorpusBundle, stopwords: frozenset[str] | None = None
) -> ResourceTextMatrix:
    """Count stems per resource, rows in resource-index order."""
    per_resource: list[dict[str, int]] = []
    vocabulary: set[str] = set()
    for rid in bundle.resource_ids:
        counts: dict[str, int] = {}
        for s in tokenize(bundle.resource_texts[rid], stopwords):
            counts[s] = counts.get(s, 0) + 1
        per_resource.append(counts)
        vocabulary.update(counts)

    stem_vocab = {s: j for j, s in enumerate(sorted(vocabulary))}
    rows, cols, data = [], [], []
    for i, counts in enumerate(per_resource):
        for s, c in counts.items():
            rows.append(i)
            cols.append(stem_vocab[s])
            data.append(float(c))
    matrix = sp.csc_array(
        (np.array(data), (np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64))),
        shape=(bundle.n, len(stem_vocab)),
    )
    matrix.sort_indices()
    return ResourceTextMatrix(counts=matrix, stem_vocab=stem_vocab)


@dataclass(frozen=True, eq=False)
class SvdResult:
    """Rank-k factorization: singular values descending, vectors columnwise.

    ``left_vectors`` is resources-by-k, ``right_vectors`` stems-by-k, both
    with orthonormal columns.
    """

    singular_values: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray

    def __post_init__(self):
        s = self.singular_values
        if s.ndim != 1:
            raise ValueError("singular values must form a vector")
        if s.size and s.min() < 0:
            raise ValueError("singular values must be non-negative")
        if np.any(np.diff(s) > 0):
            raise ValueError("singular values must be sorted descending")
        if self.left_vectors.shape[1] != s.size or self.right_vectors.shape[1] != s.size:
            raise ValueError("vector blocks must have one column per singular value")

    @property
    def k(self) -> int:
        return self.singular_values.size


def sparse_svd(matrix: ResourceTextMatrix, k: int) -> SvdResult:
    """Truncated SVD of the count matrix at rank ``k``.

    Uses the Lanczos-style iterative solver with a fixed start vector, so
    repeated calls on the same matrix give identical results.  The solver
    requires k strictly below min(shape); the boundary case falls back to a
    dense factorization, which is exact.
    """
    m, n = matrix.counts.shape
    limit = min(m, n)
    if not 1 <= k <= limit:
        raise ValueError(f"k must lie in 1..{limit} for a {m}x{n} matrix, got {k}")

    a = matrix.counts.astype(np.float64)
    if k == limit:
        u, s, vt = scipy.linalg.svd(a.toarray(), full_matrices=False)
        u, s, vt = u[:, :k], s[:k], vt[:k]
    else:
        v0 = np.ones(limit, dtype=np.float64)
        try:
            u, s, vt = scipy.sparse.linalg.svds(a, k=k, v0=v0, tol=0)
        except scipy.sparse.linalg.ArpackNoConvergence as exc:
            raise ConvergenceError(
                f"iterative SVD did not converge at k={k}: "
                f"{len(getattr(exc, 'eigenvalues', []))} values converged"
            ) from exc
        order = np.argsort(s)[::-1]
        u, s, vt = u[:, order], s[order], vt[order]
    return SvdResult(
        singular_values=np.maximum(s, 0.0),
        left_vectors=np.ascontiguousarray(u),
        right_vectors=np.ascontiguousarray(vt.T),
    )


def resource_coordinates(svd: SvdResult) -> np.ndarray:
    """Per-resource coordinates in the latent space: rows of U scaled by S.

    Row norms never exceed the corresponding row norms of the original
    matrix, since these are projections onto the top right-singular
    directions.
    """
    return svd.left_vectors * svd.singular_values[np.newaxis, :]


def dump_matrix_market(matrix: ResourceTextMatrix, path) -> None:
    """Debug dump of the counts in MatrixMarket coordinate format."""
    scipy.io.mmwrite(str(path), sp.coo_array(matrix.counts))
