"""Retrieve -> regress -> predict, plus the plain zero-shot baseline.

The reconstructed vector F W is deliberately not re-normalized before
the class argmax: cosine similarity is scale-invariant, so the label is
unaffected. Inputs are likewise used exactly as given.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..bank.build import ConceptBank
from ..errors import DimensionMismatchError, EmptyClassSetError
from ..regress.solvers import (
    elastic_net_cd,
    htp,
    lasso_cd,
    least_squares,
    similarity_weights,
)
from ..regress.types import ConceptWeights, RegressionProblem
from ..retrieval.exact import RetrievalSet, topk_exact
from ..retrieval.ivf import IvfIndex, topk_ivf
from .classes import ClassSet

DEGENERATE_NORM = 1e-10
DEFAULT_K = 2048
DEFAULT_LAMBDA = 1e-5


@dataclass
class SolverConfig:
    name: str = "lasso"
    l1: float = DEFAULT_LAMBDA
    l2: float = 1e-4
    s: int = 256
    step: float = 0.5
    max_iter: int = 1000
    tol: float = 1e-7

    def solve(self, problem: RegressionProblem) -> ConceptWeights:
        if self.name == "lasso":
            return lasso_cd(problem, self.l1, max_iter=self.max_iter, tol=self.tol)
        if self.name == "elastic_net":
            return elastic_net_cd(problem, self.l1, self.l2,
                                  max_iter=self.max_iter, tol=self.tol)
        if self.name == "htp":
            return htp(problem, min(self.s, problem.k), step=self.step,
                       max_iter=self.max_iter)
        if self.name == "least_squares":
            return least_squares(problem)
        if self.name == "similarity":
            return similarity_weights(problem)
        raise ValueError(f"unknown solver {self.name!r}")


@dataclass
class Prediction:
    label_id: int
    class_scores: np.ndarray
    concepts: list[tuple[str, int, float]]  # (text, bank index, weight), |w| desc
    reconstructed: np.ndarray
    weights: ConceptWeights
    retrieval: RetrievalSet
    fallback: bool = False
    input: np.ndarray = field(default=None, repr=False)
    active_vectors: np.ndarray = field(default=None, repr=False)

    def to_record(self, include_scores: bool = False) -> dict:
        record = {
            "label_id": int(self.label_id),
            "concepts": [
                {"text": text, "bank_index": int(idx), "weight": float(w)}
                for text, idx, w in self.concepts
            ],
            "fallback": bool(self.fallback),
        }
        if include_scores:
            record["class_scores"] = [float(s) for s in self.class_scores]
        return record


def class_cosines(vector: np.ndarray, classes: ClassSet) -> np.ndarray:
    if classes.count == 0:
        raise EmptyClassSetError("class set is empty")
    rows = classes.embeddings.data.astype(np.float64)
    v = np.asarray(vector, dtype=np.float64)
    if v.shape[0] != rows.shape[1]:
        raise DimensionMismatchError(
            f"vector dim {v.shape[0]} != class dim {rows.shape[1]}"
        )
    vn = np.linalg.norm(v)
    if vn <= 0:
        return np.zeros(rows.shape[0])
    # class rows are unit-norm, so the dot with the normalized vector is cosine
    return rows @ (v / vn)


def argmax_label(scores: np.ndarray, classes: ClassSet) -> int:
    ids = classes.label_ids()
    order = np.lexsort((ids, -scores))
    return int(ids[order[0]])


def zero_shot_baseline(x: np.ndarray, classes: ClassSet) -> tuple[int, np.ndarray]:
    """Label by direct cosine of the input against class embeddings."""
    scores = class_cosines(x, classes)
    return argmax_label(scores, classes), scores


def rank_concepts(weights: np.ndarray, indices: np.ndarray,
                  vocab: list[str] | None) -> list[tuple[str, int, float]]:
    nz = np.flatnonzero(weights)
    order = np.lexsort((indices[nz], -np.abs(weights[nz])))
    ranked = []
    for pos in nz[order]:
        idx = int(indices[pos])
        text = vocab[idx] if (vocab is not None and 0 <= idx < len(vocab)) else ""
        ranked.append((text, idx, float(weights[pos])))
    return ranked


def infer(x, bank: ConceptBank, classes: ClassSet, k: int = DEFAULT_K,
          solver_cfg: SolverConfig | None = None,
          index: IvfIndex | None = None) -> Prediction:
    """Full concept-bottleneck inference for one embedding vector."""
    cfg = solver_cfg or SolverConfig()
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] != bank.dim:
        raise DimensionMismatchError(
            f"input dim {x.shape[0]} != bank dim {bank.dim}"
        )
    if classes.dim != bank.dim:
        raise DimensionMismatchError(
            f"class dim {classes.dim} != bank dim {bank.dim}"
        )
    if index is not None:
        retrieval = topk_ivf(x, bank, index, k)
    else:
        retrieval = topk_exact(x, bank, k)
    candidates = bank.embeddings.data[retrieval.indices].astype(np.float64)
    problem = RegressionProblem(concepts=candidates, target=x)
    weights = cfg.solve(problem)

    reconstructed = candidates.T @ weights.w
    fallback = float(np.linalg.norm(reconstructed)) < DEGENERATE_NORM
    scored_vector = x if fallback else reconstructed
    scores = class_cosines(scored_vector, classes)
    label = argmax_label(scores, classes)

    concepts = rank_concepts(weights.w, retrieval.indices, bank.vocab)
    nz = np.flatnonzero(weights.w)
    return Prediction(
        label_id=label,
        class_scores=scores,
        concepts=concepts,
        reconstructed=reconstructed,
        weights=weights,
        retrieval=retrieval,
        fallback=fallback,
        input=x,
        active_vectors=candidates[nz][np.lexsort(
            (retrieval.indices[nz], -np.abs(weights.w[nz]))
        )],
    )
