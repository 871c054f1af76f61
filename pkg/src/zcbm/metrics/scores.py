"""Evaluation quantities over predictions and embedding sets."""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..errors import (
    DimensionMismatchError,
    EmptyReferenceError,
    LengthMismatchError,
    NoNonzeroConceptsError,
    TooFewConceptsError,
)
from ..regress.types import ConceptWeights
from ..vecstore.types import EmbeddingMatrix

COVERAGE_CONTRIBUTION_CUT = 0.05
CLIP_SCORE_TOP_N = 10


def top1_accuracy(predictions, truths) -> float:
    predictions = list(predictions)
    truths = list(truths)
    if len(predictions) != len(truths):
        raise LengthMismatchError(
            f"{len(predictions)} predictions vs {len(truths)} truths"
        )
    if not predictions:
        raise LengthMismatchError("need at least one prediction")
    hits = sum(1 for p, t in zip(predictions, truths) if p == t)
    return hits / len(predictions)


def top_weight_order(weights: ConceptWeights) -> np.ndarray:
    """Nonzero positions ranked by descending |weight|, index ascending."""
    nz = np.flatnonzero(weights.w)
    return nz[np.lexsort((nz, -np.abs(weights.w[nz])))]


def clip_score(scorer_image: np.ndarray, scorer_concepts: EmbeddingMatrix,
               weights: ConceptWeights, top_n: int = CLIP_SCORE_TOP_N) -> float:
    """Mean cosine between the scorer image and its top-|weight| concepts.

    The scorer embeddings live in their own space (usually a different
    model than the pipeline's); only their mutual dimension must agree.
    """
    ranked = top_weight_order(weights)
    if ranked.size == 0:
        raise NoNonzeroConceptsError("no nonzero concept weights to score")
    take = ranked[:top_n]
    img = np.asarray(scorer_image, dtype=np.float64)
    if img.shape[0] != scorer_concepts.dim:
        raise DimensionMismatchError(
            f"scorer image dim {img.shape[0]} != concept dim {scorer_concepts.dim}"
        )
    rows = scorer_concepts.data[take].astype(np.float64)
    img_n = img / np.linalg.norm(img)
    norms = np.linalg.norm(rows, axis=1)
    cosines = (rows @ img_n) / norms
    return float(np.mean(cosines))


def concept_coverage(predicted, reference) -> float:
    """|predicted ∩ reference| / |reference| after case-folding."""
    ref = {r.casefold() for r in reference}
    if not ref:
        raise EmptyReferenceError("reference concept set is empty")
    pred = {p.casefold() for p in predicted}
    return len(pred & ref) / len(ref)


def sparsity(weights: ConceptWeights, k: int) -> float:
    """Fraction of zero coefficients among the k candidates."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return 1.0 - weights.nonzero_count / k


def inner_redundancy(scorer_concepts: EmbeddingMatrix) -> float:
    """Mean pairwise cosine over distinct unordered concept pairs."""
    n = scorer_concepts.count
    if n < 2:
        raise TooFewConceptsError("need at least two concepts")
    rows = scorer_concepts.data.astype(np.float64)
    rows = rows / np.linalg.norm(rows, axis=1, keepdims=True)
    gram = rows @ rows.T
    upper = gram[np.triu_indices(n, k=1)]
    return float(np.mean(upper))


def modality_gap(set_a: EmbeddingMatrix, set_b: EmbeddingMatrix) -> float:
    """L2 distance between the centroids of two row-normalized sets."""
    if set_a.dim != set_b.dim:
        raise DimensionMismatchError(
            f"dims {set_a.dim} and {set_b.dim} differ"
        )
    if set_a.count == 0 or set_b.count == 0:
        raise ValueError("both sets must be non-empty")

    def centroid(m: EmbeddingMatrix) -> np.ndarray:
        rows = m.data.astype(np.float64)
        rows = rows / np.linalg.norm(rows, axis=1, keepdims=True)
        return rows.mean(axis=0)

    return float(np.linalg.norm(centroid(set_a) - centroid(set_b)))


@dataclass
class EvalReport:
    dataset_name: str
    n_samples: int
    top1_accuracy: float
    mean_clip_score: float | None = None
    mean_sparsity: float | None = None
    mean_inner_redundancy: float | None = None
    modality_gap_image_to_label: float | None = None
    modality_gap_concept_to_label: float | None = None

    def to_json(self) -> str:
        return json.dumps(self.__dict__, indent=2, sort_keys=True) + "\n"
