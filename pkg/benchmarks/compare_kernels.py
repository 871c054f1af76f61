"""Compare the compiled coordinate-descent kernel against the numpy twin.

Usage:
    python benchmarks/compare_kernels.py [--k 2048] [--d 512] [--repeats 5]

Prints per-kernel sweep throughput and the end-to-end lasso solve time on
a synthetic retrieval-sized problem.
"""
import argparse
import time

import numpy as np

from zcbm.regress import kernels
from zcbm.regress.solvers import lasso_cd
from zcbm.regress.types import RegressionProblem


def make_problem(k: int, d: int, seed: int = 0) -> RegressionProblem:
    rng = np.random.default_rng(seed)
    cols = rng.standard_normal((k, d))
    cols /= np.linalg.norm(cols, axis=1, keepdims=True)
    picks = rng.integers(0, k, size=3)
    weights = rng.uniform(0.3, 1.0, size=3)
    target = (weights[:, None] * cols[picks]).sum(axis=0)
    return RegressionProblem(concepts=cols, target=target)


def time_kernel(kernel, problem: RegressionProblem, sweeps: int,
                repeats: int) -> float:
    colsq = problem.column_norms_sq()
    best = float("inf")
    for _ in range(repeats):
        w = np.zeros(problem.k)
        r = problem.target.copy()
        start = time.perf_counter()
        kernel(problem.concepts, colsq, w, r, 1e-4, 0.0, 0.0, sweeps)
        best = min(best, time.perf_counter() - start)
    return best


def time_solve(problem: RegressionProblem, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        lasso_cd(problem, 1e-4)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--k", type=int, default=2048)
    parser.add_argument("--d", type=int, default=512)
    parser.add_argument("--sweeps", type=int, default=20)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    problem = make_problem(args.k, args.d)
    print(f"problem: K={args.k} d={args.d}, {args.sweeps} sweeps, "
          f"best of {args.repeats}")

    rows = []
    names = {"numpy": kernels.cd_sweeps_numpy}
    try:
        from zcbm.regress._cdcore import cd_sweeps as compiled

        names["compiled"] = compiled
    except ImportError:
        print("compiled kernel unavailable (build the extension first)")

    for name, kernel in names.items():
        elapsed = time_kernel(kernel, problem, args.sweeps, args.repeats)
        rows.append((name, elapsed))
        per_sweep = elapsed / args.sweeps * 1000
        print(f"  {name:>9}: {elapsed * 1000:8.2f} ms  ({per_sweep:.3f} ms/sweep)")

    if len(rows) == 2:
        speedup = rows[0][1] / rows[1][1]
        print(f"  speedup: {speedup:.1f}x (compiled over numpy)")

    active = kernels.KERNEL_BACKEND
    solve = time_solve(problem, args.repeats)
    print(f"full lasso solve with selected backend [{active}]: "
          f"{solve * 1000:.2f} ms")


if __name__ == "__main__":
    main()
