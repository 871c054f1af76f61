"""Embedding vectors and matrices.

Vectors are plain 1-D numpy arrays. Matrices carry rows of float32
embeddings; every reduction (norms, dot products) runs in float64.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionMismatchError, NonFiniteError, ZeroNormError

NORM_ATOL = 1e-5
ZERO_NORM_EPS = 1e-12


def normalize(v) -> np.ndarray:
    """Return v / ||v||_2 as float32.

    Raises NonFiniteError for NaN/Inf input and ZeroNormError when the
    norm falls below 1e-12.
    """
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("expected a non-empty 1-D vector")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError("vector contains NaN or Inf")
    norm = float(np.linalg.norm(arr))
    if norm < ZERO_NORM_EPS:
        raise ZeroNormError(f"vector norm {norm:.3e} below {ZERO_NORM_EPS:.0e}")
    return (arr / norm).astype(np.float32)


def cosine(a, b) -> float:
    """Cosine similarity of two vectors, accumulated in float64."""
    va = np.asarray(a, dtype=np.float64)
    vb = np.asarray(b, dtype=np.float64)
    if va.shape != vb.shape:
        raise DimensionMismatchError(f"shapes {va.shape} and {vb.shape} differ")
    na = float(np.linalg.norm(va))
    nb = float(np.linalg.norm(vb))
    if na < ZERO_NORM_EPS or nb < ZERO_NORM_EPS:
        raise ZeroNormError("cosine of a zero vector is undefined")
    return float(va @ vb) / (na * nb)


@dataclass
class EmbeddingMatrix:
    """N x d row-major float32 embedding matrix.

    `normalized` flags that every row is unit-norm; ingestion paths set it
    after renormalizing, so retrieval can treat cosine as a dot product.
    """

    data: np.ndarray
    normalized: bool = False
    _validated: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        arr = np.ascontiguousarray(np.asarray(self.data, dtype=np.float32))
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-D array, got ndim={arr.ndim}")
        self.data = arr
        if not self._validated:
            self.validate()
            self._validated = True

    @property
    def count(self) -> int:
        return int(self.data.shape[0])

    @property
    def dim(self) -> int:
        return int(self.data.shape[1])

    def validate(self) -> None:
        if self.data.size and not np.all(np.isfinite(self.data)):
            raise NonFiniteError("matrix contains NaN or Inf")
        if self.normalized and self.count:
            norms = np.linalg.norm(self.data.astype(np.float64), axis=1)
            bad = np.abs(norms - 1.0) > NORM_ATOL
            if bad.any():
                raise ZeroNormError(
                    f"{int(bad.sum())} rows violate the unit-norm invariant"
                )

    def row(self, i: int) -> np.ndarray:
        return self.data[i]

    @classmethod
    def from_rows(cls, rows, normalized: bool = False) -> "EmbeddingMatrix":
        return cls(np.asarray(rows, dtype=np.float32), normalized=normalized)

    @classmethod
    def empty(cls, dim: int) -> "EmbeddingMatrix":
        return cls(np.zeros((0, dim), dtype=np.float32), normalized=True)


def normalize_rows(m: np.ndarray) -> np.ndarray:
    """Row-wise L2 normalization (float64 accumulation, float32 result)."""
    arr = np.asarray(m, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError("matrix contains NaN or Inf")
    norms = np.linalg.norm(arr, axis=1, keepdims=True)
    if (norms < ZERO_NORM_EPS).any():
        raise ZeroNormError("matrix contains a (near-)zero row")
    return (arr / norms).astype(np.float32)
