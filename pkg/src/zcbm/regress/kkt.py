"""Stationarity checks for the l1/l2 objective, independent of any solver.

For f(w) = ||y - Fw||^2 + l1 ||w||_1 + l2 ||w||^2 with g = 2 F^T (y - Fw):

    w_j = 0:   |g_j| <= l1
    w_j != 0:  g_j - 2 l2 w_j = l1 sign(w_j)

The violation is the largest absolute breach over all coordinates.
"""
from __future__ import annotations

import numpy as np

from .types import RegressionProblem


def kkt_violation(problem: RegressionProblem, w: np.ndarray,
                  l1: float, l2: float = 0.0) -> float:
    w = np.asarray(w, dtype=np.float64)
    r = problem.residual(w)
    g = 2.0 * (problem.concepts @ r)
    active = w != 0
    violation = 0.0
    if (~active).any():
        violation = max(
            violation, float(np.max(np.maximum(np.abs(g[~active]) - l1, 0.0)))
        )
    if active.any():
        stationarity = g[active] - 2.0 * l2 * w[active] - l1 * np.sign(w[active])
        violation = max(violation, float(np.max(np.abs(stationarity))))
    return violation


def kkt_tolerance(l1: float) -> float:
    return 1e-6 * max(l1, 1.0)


def satisfies_kkt(problem: RegressionProblem, w: np.ndarray, l1: float,
                  l2: float = 0.0, tol: float | None = None) -> bool:
    if tol is None:
        tol = kkt_tolerance(l1)
    return kkt_violation(problem, w, l1, l2) <= tol
