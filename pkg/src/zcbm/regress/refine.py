"""Active-set refinement for the l1/l2 objective.

Coordinate descent identifies the support quickly but crawls toward
tight stationarity tolerances, especially on overcomplete designs with
small l1. This routine finishes the job: it solves the stationarity
system exactly on the current sign-fixed face, walks zero crossings when
signs flip, and escapes faces without interior stationary points by
descending along the inconsistency (null-space) direction. Every
accepted result is certified by the independent KKT check.
"""
from __future__ import annotations

import numpy as np

from .kkt import kkt_violation
from .types import RegressionProblem

_CROSS_EPS = 1e-14


def _face_system(cols: np.ndarray, y: np.ndarray, sup: np.ndarray,
                 theta: np.ndarray, l1: float, l2: float):
    A = cols[sup]
    G = 2.0 * (A @ A.T)
    if l2:
        G[np.diag_indices_from(G)] += 2.0 * l2
    b = 2.0 * (A @ y) - l1 * theta[sup]
    return A, G, b


def _solve_face(G: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Solve G w = b, preferring LU; fall back to lstsq when LU is unreliable.

    Returns (solution, residual). A non-trivial residual after the lstsq
    fallback means the system is inconsistent (b has a null-space part).
    """
    tol = 1e-9 * max(1.0, float(np.max(np.abs(b))))
    try:
        sol = np.linalg.solve(G, b)
        resid = G @ sol - b
        if np.max(np.abs(resid)) <= tol:
            return sol, resid
    except np.linalg.LinAlgError:
        pass
    sol, *_ = np.linalg.lstsq(G, b, rcond=None)
    return sol, G @ sol - b


def _prune_seed(problem: RegressionProblem, w: np.ndarray) -> np.ndarray:
    """Trim negligible and overflow coordinates from a warm-start iterate.

    A generic optimum has at most `dim` nonzeros; coordinates whose
    weight is tiny relative to the largest are CD leftovers that would
    each cost one shedding step. Dropped coordinates re-enter later via
    the dead-zone check if they actually belong in the support.
    """
    support = np.flatnonzero(w)
    if support.size == 0:
        return w
    mags = np.abs(w[support])
    floor = 1e-4 * float(mags.max())
    keep = support[mags >= floor]
    cap = problem.dim + 32
    if keep.size > cap:
        order = np.argsort(-np.abs(w[keep]), kind="stable")
        keep = keep[order[:cap]]
    pruned = np.zeros_like(w)
    pruned[keep] = w[keep]
    return pruned


def _multi_drop(problem: RegressionProblem, w: np.ndarray, l1: float,
                l2: float, kkt_tol: float, rounds: int = 4):
    """Fast path: solve on the support, drop all sign flips, repeat.

    No monotonicity guarantee, so the result only counts if the
    independent KKT check certifies it.
    """
    cols = problem.concepts
    y = problem.target
    cand = w.copy()
    for _ in range(rounds):
        sup = np.flatnonzero(cand)
        if sup.size == 0:
            break
        theta = np.sign(cand)
        A, G, b = _face_system(cols, y, sup, theta, l1, l2)
        sol, resid = _solve_face(G, b)
        if np.max(np.abs(resid)) > 1e-9 * max(1.0, float(np.max(np.abs(b)))):
            break
        flips = np.sign(sol) != theta[sup]
        nxt = np.zeros_like(cand)
        nxt[sup[~flips]] = sol[~flips]
        cand = nxt
        if not flips.any():
            break
    if kkt_violation(problem, cand, l1, l2) <= kkt_tol:
        return cand, True
    return cand, False


def refine(problem: RegressionProblem, w0: np.ndarray, l1: float, l2: float,
           kkt_tol: float, max_outer: int | None = None) -> tuple[np.ndarray, bool]:
    """Drive w0 to a KKT point. Returns (w, certified)."""
    cols = problem.concepts
    y = problem.target
    K = problem.k
    w = _prune_seed(problem, np.asarray(w0, dtype=np.float64))

    fast, ok = _multi_drop(problem, w, l1, l2, kkt_tol)
    if ok:
        return fast, True
    if problem.objective(fast, l1, l2) < problem.objective(w, l1, l2):
        w = fast

    if max_outer is None:
        max_outer = min(500, 2 * int(np.count_nonzero(w)) + 64)

    for _ in range(max_outer):
        if kkt_violation(problem, w, l1, l2) <= kkt_tol:
            return w, True
        r = problem.residual(w)
        g = 2.0 * (cols @ r)
        act = w != 0
        theta = np.sign(w)
        # admit the worst inactive violator
        inact_viol = np.where(~act, np.maximum(np.abs(g) - l1, 0.0), 0.0)
        j = int(np.argmax(inact_viol))
        if inact_viol[j] > 0.0:
            theta[j] = np.sign(g[j])
            act[j] = True

        for _inner in range(2 * K + 4):
            sup = np.flatnonzero(act)
            if sup.size == 0:
                break
            A, G, b = _face_system(cols, y, sup, theta, l1, l2)
            what, resid = _solve_face(G, b)
            if np.max(np.abs(resid)) > 1e-9 * max(1.0, float(np.max(np.abs(b)))):
                # no stationary point on this face: the objective falls
                # linearly along -resid until some coordinate hits zero
                n = -resid
                n /= np.linalg.norm(n)
                if float(b @ n) < 0:
                    n = -n
                cur = w[sup]
                with np.errstate(divide="ignore", invalid="ignore"):
                    crossings = np.where(
                        n != 0, -cur / np.where(n == 0, np.inf, n), np.inf
                    )
                crossings = np.where(crossings > 1e-18, crossings, np.inf)
                t_star = float(np.min(crossings))
                if not np.isfinite(t_star):
                    return w, False
                kill = int(np.argmin(crossings))
                moved = cur + t_star * n
                moved[kill] = 0.0
                w[sup] = moved
                act = np.zeros(K, dtype=bool)
                act[sup[moved != 0]] = True
                theta = np.sign(w)
                continue

            if np.all(np.sign(what) == theta[sup]):
                w[sup] = what
                break

            # signs flipped: take the best objective over the crossing points
            cur = w[sup].copy()
            direction = what - cur
            with np.errstate(divide="ignore", invalid="ignore"):
                tz = np.where(
                    (cur != 0) & (np.sign(cur) * np.sign(what) <= 0),
                    cur / np.where(direction == 0, np.inf, -direction),
                    np.inf,
                )
            ts = np.unique(tz[(tz > 0) & (tz <= 1)])
            best_obj = np.inf
            best_w = what
            for cand in [what] + [cur + t * direction for t in ts]:
                trimmed = cand.copy()
                trimmed[np.abs(trimmed) < _CROSS_EPS] = 0.0
                res = y - A.T @ trimmed
                obj = float(res @ res) + l1 * float(np.abs(trimmed).sum())
                if l2:
                    obj += l2 * float(trimmed @ trimmed)
                if obj < best_obj:
                    best_obj = obj
                    best_w = trimmed
            if best_obj >= problem.objective(w, l1, l2) - 1e-15:
                return w, False  # degenerate stall; caller keeps sweeping
            w[sup] = best_w
            act = np.zeros(K, dtype=bool)
            act[sup[best_w != 0]] = True
            theta = np.sign(w)

    return w, kkt_violation(problem, w, l1, l2) <= kkt_tol
