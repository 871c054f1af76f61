"""Importance-weight solvers.

The l1 objective is used exactly as written, with no 1/n or 1/(2n)
scaling:

    ||y - F W||^2 + l1 ||W||_1 (+ l2 ||W||^2 for the elastic net)

To translate a penalty quoted against the common scaled convention
(1/(2n) residual term), multiply it by 2n: l1_here = 2 * n * alpha_scaled.
"""
from __future__ import annotations

import numpy as np

from ..vecstore.types import ZERO_NORM_EPS
from . import kernels
from .kkt import kkt_tolerance, kkt_violation
from .refine import refine
from .types import ConceptWeights, RegressionProblem

DEFAULT_MAX_ITER = 1000
DEFAULT_TOL = 1e-7
REFINE_EVERY = 10
CONTINUATION_SWEEPS = 12
HTP_DEFAULT_STEP = 0.5


def soft_threshold(z: float, gamma: float) -> float:
    """sign(z) * max(|z| - gamma, 0)."""
    if gamma < 0:
        raise ValueError("gamma must be non-negative")
    if z > gamma:
        return z - gamma
    if z < -gamma:
        return z + gamma
    return 0.0


def _cd_solve(problem: RegressionProblem, l1: float, l2: float, max_iter: int,
              tol: float, solver: str, debug: bool = False) -> ConceptWeights:
    cols = problem.concepts
    y = problem.target
    colsq = problem.column_norms_sq()
    w = np.zeros(problem.k, dtype=np.float64)
    r = y.copy()
    kkt_tol = kkt_tolerance(l1)
    accept_tol = 0.9 * kkt_tol

    kernel = kernels.cd_sweeps_numpy if debug else kernels.cd_sweeps
    sweeps_done = 0
    if not debug and l1 > 0:
        # penalty continuation: a tiny penalty applied from a cold start
        # activates nearly every coordinate before they cancel again.
        # Warm-starting through a geometric penalty schedule keeps the
        # support small the whole way down.
        lam_max = 2.0 * float(np.max(np.abs(cols @ y))) if problem.k else 0.0
        stage = 0.1 * lam_max
        while stage > l1 * 10.0 and sweeps_done + CONTINUATION_SWEEPS < max_iter:
            done, _ = kernel(cols, colsq, w, r, stage, l2, tol,
                             CONTINUATION_SWEEPS)
            sweeps_done += done
            stage *= 0.1
    cur_tol = tol
    # refinement attempts back off exponentially so their dense solves
    # stay cheap relative to the sweeps on large candidate sets
    refine_interval = REFINE_EVERY
    next_refine = REFINE_EVERY
    prev_obj = problem.objective(w, l1, l2)
    while sweeps_done < max_iter:
        block = 1 if debug else max(1, min(next_refine, max_iter) - sweeps_done)
        done, max_delta = kernel(cols, colsq, w, r, l1, l2, cur_tol, block)
        sweeps_done += done
        if debug:
            obj = problem.objective(w, l1, l2)
            assert obj <= prev_obj + 1e-9 * max(1.0, abs(prev_obj)), (
                f"objective increased across a sweep: {prev_obj} -> {obj}"
            )
            prev_obj = obj
        stalled = max_delta < cur_tol
        if stalled or sweeps_done >= next_refine or sweeps_done >= max_iter:
            refined, ok = refine(problem, w, l1, l2, accept_tol)
            if ok:
                return ConceptWeights(
                    w=refined, solver=solver, l1=l1, l2=l2 or None,
                    iterations=sweeps_done, converged=True,
                )
            refine_interval = min(refine_interval * 2, 200)
            next_refine = sweeps_done + refine_interval
            if stalled:
                # sweeps alone cannot tighten further at this tolerance
                cur_tol /= 10.0
    converged = kkt_violation(problem, w, l1, l2) <= kkt_tol
    return ConceptWeights(
        w=w, solver=solver, l1=l1, l2=l2 or None,
        iterations=sweeps_done, converged=converged,
    )


def lasso_cd(problem: RegressionProblem, l1: float,
             max_iter: int = DEFAULT_MAX_ITER, tol: float = DEFAULT_TOL,
             debug: bool = False) -> ConceptWeights:
    """Cyclic coordinate descent for the l1 objective, started from W = 0.

    The returned weights satisfy the stationarity conditions within
    1e-6 * max(l1, 1) whenever `converged` is set.
    """
    if l1 <= 0:
        raise ValueError("l1 must be positive")
    return _cd_solve(problem, l1, 0.0, max_iter, tol, "lasso", debug=debug)


def elastic_net_cd(problem: RegressionProblem, l1: float, l2: float,
                   max_iter: int = DEFAULT_MAX_ITER, tol: float = DEFAULT_TOL,
                   debug: bool = False) -> ConceptWeights:
    """Coordinate descent for the elastic-net objective."""
    if l1 < 0 or l2 < 0 or (l1 == 0 and l2 == 0):
        raise ValueError("need l1 >= 0, l2 >= 0, not both zero")
    out = _cd_solve(problem, l1, l2, max_iter, tol, "elastic_net", debug=debug)
    out.l2 = l2
    return out


def least_squares(problem: RegressionProblem) -> ConceptWeights:
    """Minimum-norm solution of min ||y - F W||, via SVD."""
    F = problem.concepts.T
    w, *_ = np.linalg.lstsq(F, problem.target, rcond=None)
    return ConceptWeights(w=w, solver="least_squares")


def _restricted_ls(problem: RegressionProblem, support: np.ndarray) -> np.ndarray:
    w = np.zeros(problem.k, dtype=np.float64)
    if support.size:
        sub = problem.concepts[support].T
        sol, *_ = np.linalg.lstsq(sub, problem.target, rcond=None)
        w[support] = sol
    return w


def htp(problem: RegressionProblem, s: int, step: float = HTP_DEFAULT_STEP,
        max_iter: int = DEFAULT_MAX_ITER) -> ConceptWeights:
    """Hard thresholding pursuit with an s-sparse support.

    Iterates a gradient step, keeps the s largest |coordinates| (ties by
    ascending index), solves least squares on that support, and stops as
    soon as the support repeats.
    """
    if not 1 <= s <= problem.k:
        raise ValueError(f"s must be in [1, {problem.k}]")
    cols = problem.concepts
    y = problem.target
    w = np.zeros(problem.k, dtype=np.float64)
    prev_support: tuple[int, ...] | None = None
    iterations = 0
    converged = False
    for iterations in range(1, max_iter + 1):
        r = y - cols.T @ w
        u = w + step * 2.0 * (cols @ r)
        order = np.lexsort((np.arange(problem.k), -np.abs(u)))
        support = np.sort(order[:s])
        key = tuple(support.tolist())
        w = _restricted_ls(problem, support)
        if key == prev_support:
            converged = True
            break
        prev_support = key
    return ConceptWeights(
        w=w, solver="htp", s=s, iterations=iterations, converged=converged
    )


def similarity_weights(problem: RegressionProblem) -> ConceptWeights:
    """Plain cosine of the target against each concept vector."""
    y = problem.target
    yn = np.linalg.norm(y)
    norms = np.sqrt(problem.column_norms_sq())
    w = np.zeros(problem.k, dtype=np.float64)
    ok = (norms > ZERO_NORM_EPS)
    if yn > ZERO_NORM_EPS:
        w[ok] = (problem.concepts[ok] @ y) / (norms[ok] * yn)
    return ConceptWeights(w=w, solver="similarity")
