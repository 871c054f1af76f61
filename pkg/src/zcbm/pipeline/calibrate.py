"""Penalty calibration: strongest regularization that keeps enough density.

For each grid value the mean nonzero ratio (nonzero_count / k) over the
samples is measured; density shrinks as the penalty grows, so the chosen
value is the largest grid penalty whose mean ratio still exceeds the
target. If nothing qualifies, the smallest grid value is returned with
no_qualifier set.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..bank.build import ConceptBank
from ..errors import EmptySamplesError
from ..regress.solvers import lasso_cd
from ..regress.types import RegressionProblem
from ..retrieval.exact import topk_exact

DEFAULT_GRID = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8)
DEFAULT_TARGET_RATIO = 0.10


@dataclass
class CalibrationResult:
    chosen: float
    target_ratio: float
    ratios: dict[float, float]
    no_qualifier: bool = False


def calibrate_lambda(samples, bank: ConceptBank, k: int,
                     grid=DEFAULT_GRID,
                     target_ratio: float = DEFAULT_TARGET_RATIO) -> CalibrationResult:
    grid = list(grid)
    if not grid:
        raise ValueError("grid must be non-empty")
    if not 0.0 < target_ratio < 1.0:
        raise ValueError("target_ratio must lie in (0, 1)")
    samples = [np.asarray(s, dtype=np.float64) for s in samples]
    if not samples:
        raise EmptySamplesError("calibration needs at least one sample")

    problems = []
    for x in samples:
        retrieval = topk_exact(x, bank, k)
        candidates = bank.embeddings.data[retrieval.indices].astype(np.float64)
        problems.append((RegressionProblem(concepts=candidates, target=x),
                         len(retrieval)))

    ratios: dict[float, float] = {}
    for lam in grid:
        vals = []
        for problem, kk in problems:
            weights = lasso_cd(problem, lam)
            vals.append(weights.nonzero_count / kk)
        ratios[lam] = float(np.mean(vals))

    qualifying = [lam for lam in grid if ratios[lam] > target_ratio]
    if qualifying:
        return CalibrationResult(chosen=max(qualifying),
                                 target_ratio=target_ratio, ratios=ratios)
    return CalibrationResult(chosen=min(grid), target_ratio=target_ratio,
                             ratios=ratios, no_qualifier=True)
