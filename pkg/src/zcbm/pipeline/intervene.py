"""Human intervention on predicted concepts.

Deletion zeroes weights without re-fitting; insertion unions in new
concepts and re-fits by least squares against the original input. Both
then redo the class argmax on the updated reconstruction.
"""
from __future__ import annotations

import math

import numpy as np

from ..errors import DimensionMismatchError
from ..regress.solvers import least_squares
from ..regress.types import ConceptWeights, RegressionProblem
from .classes import ClassSet
from .infer import DEGENERATE_NORM, Prediction, argmax_label, class_cosines

DELETE_ORDERS = ("ascending", "descending", "random")


def _finish(p: Prediction, kept_concepts, kept_vectors, weights: ConceptWeights,
            classes: ClassSet) -> Prediction:
    if kept_vectors.shape[0]:
        reconstructed = kept_vectors.T @ weights.w
    else:
        reconstructed = np.zeros_like(p.input)
    fallback = float(np.linalg.norm(reconstructed)) < DEGENERATE_NORM
    scores = class_cosines(p.input if fallback else reconstructed, classes)
    label = argmax_label(scores, classes)
    nz = np.flatnonzero(weights.w)
    order = np.lexsort((
        np.asarray([kept_concepts[i][1] for i in nz], dtype=np.int64)
        if nz.size else np.empty(0, dtype=np.int64),
        -np.abs(weights.w[nz]),
    ))
    ranked = [
        (kept_concepts[i][0], kept_concepts[i][1], float(weights.w[i]))
        for i in nz[order]
    ]
    return Prediction(
        label_id=label,
        class_scores=scores,
        concepts=ranked,
        reconstructed=reconstructed,
        weights=weights,
        retrieval=p.retrieval,
        fallback=fallback,
        input=p.input,
        active_vectors=kept_vectors[nz[order]] if nz.size else kept_vectors[:0],
    )


def intervene_delete(p: Prediction, order: str, ratio: float,
                     classes: ClassSet, seed: int | None = None) -> Prediction:
    """Zero the first floor(ratio * n) weights in the given |weight| order.

    Remaining weights stay as they are; nothing is re-fit.
    """
    if not 0.0 <= ratio <= 1.0:
        raise ValueError("ratio must lie in [0, 1]")
    if order not in DELETE_ORDERS:
        raise ValueError(f"order must be one of {DELETE_ORDERS}")
    n = len(p.concepts)
    weights = np.asarray([w for _, _, w in p.concepts], dtype=np.float64)
    remove = math.floor(ratio * n)
    if remove == 0 or n == 0:
        kept = weights
    else:
        # concepts are already sorted by descending |weight|
        positions = np.arange(n)
        if order == "descending":
            victims = positions[:remove]
        elif order == "ascending":
            victims = positions[::-1][:remove]
        else:
            if seed is None:
                raise ValueError("random order requires a seed")
            rng = np.random.default_rng(seed)
            victims = rng.permutation(n)[:remove]
        kept = weights.copy()
        kept[victims] = 0.0
    new_weights = ConceptWeights(
        w=kept, solver=p.weights.solver, l1=p.weights.l1, l2=p.weights.l2,
        s=p.weights.s, iterations=p.weights.iterations,
        converged=p.weights.converged,
    )
    return _finish(p, list(p.concepts), p.active_vectors, new_weights, classes)


def intervene_insert(p: Prediction, concepts: list[tuple[str, np.ndarray]],
                     classes: ClassSet) -> Prediction:
    """Union in ground-truth concepts and re-fit by least squares."""
    existing = {text.casefold() for text, _, _ in p.concepts}
    base_vectors = [p.active_vectors[i] for i in range(len(p.concepts))]
    merged = list(p.concepts)
    vectors = list(base_vectors)
    for text, emb in concepts:
        if text.casefold() in existing:
            continue
        emb = np.asarray(emb, dtype=np.float64)
        if emb.shape[0] != p.input.shape[0]:
            raise DimensionMismatchError(
                f"inserted concept dim {emb.shape[0]} != input dim {p.input.shape[0]}"
            )
        existing.add(text.casefold())
        merged.append((text, -1, 0.0))
        vectors.append(emb)
    if not merged:
        return intervene_delete(p, "ascending", 0.0, classes)
    stacked = np.vstack(vectors) if vectors else p.active_vectors[:0]
    problem = RegressionProblem(concepts=stacked, target=p.input)
    refit = least_squares(problem)
    return _finish(p, merged, stacked, refit, classes)
