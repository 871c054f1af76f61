"""Exact top-K cosine retrieval over a concept bank.

Scans the bank in blocks and keeps a bounded candidate pool, so a full
sort of all N rows never happens. Ordering is a strict total order:
descending score, then ascending bank index, which makes results (and
tie-breaks) reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionMismatchError, EmptyBankError

BLOCK_ROWS = 8192


@dataclass
class RetrievalSet:
    indices: np.ndarray  # int64, length min(k, N)
    scores: np.ndarray   # float64, non-increasing
    k: int

    def __len__(self) -> int:
        return int(self.indices.size)


def _select_topk(scores: np.ndarray, indices: np.ndarray, k: int):
    """Top-k of (scores, indices) under (-score, index) order."""
    n = scores.size
    if k >= n:
        order = np.lexsort((indices, -scores))
        return scores[order], indices[order]
    kth = n - k
    part = np.argpartition(scores, kth)[kth:]
    boundary = scores[part].min()
    above = scores > boundary
    sel_scores = scores[above]
    sel_indices = indices[above]
    missing = k - sel_scores.size
    if missing > 0:
        eq = np.flatnonzero(scores == boundary)
        eq = eq[np.argsort(indices[eq], kind="stable")][:missing]
        sel_scores = np.concatenate([sel_scores, scores[eq]])
        sel_indices = np.concatenate([sel_indices, indices[eq]])
    order = np.lexsort((sel_indices, -sel_scores))
    return sel_scores[order], sel_indices[order]


def scores_for(query: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Cosine scores of a query against unit-norm rows.

    einsum with a float64 query accumulates in float64 with a summation
    order independent of row gathering, so exact and IVF paths produce
    bit-identical scores.
    """
    q = np.asarray(query, dtype=np.float64)
    qn = np.linalg.norm(q)
    if qn <= 0:
        raise ValueError("query has zero norm")
    return np.einsum("ij,j->i", rows, q / qn)


def topk_rows(query: np.ndarray, rows: np.ndarray, k: int,
              row_ids: np.ndarray | None = None) -> RetrievalSet:
    """Deterministic top-k over an arbitrary row subset."""
    n = rows.shape[0]
    if n == 0:
        raise EmptyBankError("cannot retrieve from an empty bank")
    if k < 1:
        raise ValueError("k must be >= 1")
    q = np.asarray(query, dtype=np.float64)
    if q.shape != (rows.shape[1],):
        raise DimensionMismatchError(
            f"query dim {q.shape} does not match bank dim {rows.shape[1]}"
        )
    if row_ids is None:
        row_ids = np.arange(n, dtype=np.int64)
    qn = np.linalg.norm(q)
    if qn <= 0:
        raise ValueError("query has zero norm")
    qunit = q / qn

    kk = min(k, n)
    best_scores = np.empty(0, dtype=np.float64)
    best_ids = np.empty(0, dtype=np.int64)
    for start in range(0, n, BLOCK_ROWS):
        block = rows[start : start + BLOCK_ROWS]
        s = np.einsum("ij,j->i", block, qunit)
        ids = row_ids[start : start + BLOCK_ROWS]
        pool_scores = np.concatenate([best_scores, s])
        pool_ids = np.concatenate([best_ids, ids])
        best_scores, best_ids = _select_topk(pool_scores, pool_ids, kk)
    return RetrievalSet(indices=best_ids, scores=best_scores, k=k)


def topk_exact(query, bank, k: int) -> RetrievalSet:
    """Exactly the k highest-cosine bank concepts for the query."""
    return topk_rows(query, bank.embeddings.data, k)
