"""Problem and solution containers for concept regression."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionMismatchError, NonFiniteError


@dataclass
class RegressionProblem:
    """Reconstruct `target` from the design whose columns are `concepts` rows.

    `concepts` is the K x d array of concept vectors, i.e. the design
    matrix F is concepts.T with one concept per column.
    """

    concepts: np.ndarray
    target: np.ndarray

    def __post_init__(self):
        self.concepts = np.ascontiguousarray(self.concepts, dtype=np.float64)
        self.target = np.ascontiguousarray(self.target, dtype=np.float64)
        if self.concepts.ndim != 2 or self.target.ndim != 1:
            raise ValueError("concepts must be 2-D and target 1-D")
        if self.concepts.shape[1] != self.target.shape[0]:
            raise DimensionMismatchError(
                f"concept dim {self.concepts.shape[1]} != target dim {self.target.shape[0]}"
            )
        if not np.all(np.isfinite(self.concepts)) or not np.all(
            np.isfinite(self.target)
        ):
            raise NonFiniteError("regression inputs contain NaN or Inf")

    @property
    def k(self) -> int:
        return int(self.concepts.shape[0])

    @property
    def dim(self) -> int:
        return int(self.concepts.shape[1])

    def column_norms_sq(self) -> np.ndarray:
        return np.einsum("ij,ij->i", self.concepts, self.concepts)

    def residual(self, w: np.ndarray) -> np.ndarray:
        return self.target - self.concepts.T @ w

    def objective(self, w: np.ndarray, l1: float = 0.0, l2: float = 0.0) -> float:
        r = self.residual(w)
        val = float(r @ r)
        if l1:
            val += l1 * float(np.abs(w).sum())
        if l2:
            val += l2 * float(w @ w)
        return val


@dataclass
class ConceptWeights:
    """Importance weights with solver provenance."""

    w: np.ndarray
    solver: str
    l1: float | None = None
    l2: float | None = None
    s: int | None = None
    iterations: int = 0
    converged: bool = True
    nonzero_count: int = field(init=False)

    def __post_init__(self):
        self.w = np.asarray(self.w, dtype=np.float64)
        self.nonzero_count = int(np.count_nonzero(self.w))

    def nonzero_indices(self) -> np.ndarray:
        return np.flatnonzero(self.w)
