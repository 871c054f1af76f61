"""Coordinate-descent kernel selection.

The compiled extension is preferred; a pure-numpy kernel with identical
semantics is the fallback. Set ZCBM_PURE_PYTHON=1 to force the fallback
(useful for debugging and for benchmarking the two side by side).
"""
from __future__ import annotations

import os

import numpy as np


def cd_sweeps_numpy(cols: np.ndarray, colsq: np.ndarray, w: np.ndarray,
                    r: np.ndarray, l1: float, l2: float, tol: float,
                    max_sweeps: int):
    """Pure-numpy twin of the compiled kernel (same update, same order)."""
    K = cols.shape[0]
    last_delta = 0.0
    for sweep in range(max_sweeps):
        max_delta = 0.0
        for j in range(K):
            sq = colsq[j]
            if sq <= 1e-24:
                continue
            col = cols[j]
            z = 2.0 * (col @ r + sq * w[j])
            if z > l1:
                wj_new = (z - l1) / (2.0 * sq + 2.0 * l2)
            elif z < -l1:
                wj_new = (z + l1) / (2.0 * sq + 2.0 * l2)
            else:
                wj_new = 0.0
            delta = wj_new - w[j]
            if delta != 0.0:
                r -= delta * col
                w[j] = wj_new
                if abs(delta) > max_delta:
                    max_delta = abs(delta)
        last_delta = max_delta
        if max_delta < tol:
            return sweep + 1, last_delta
    return max_sweeps, last_delta


if os.environ.get("ZCBM_PURE_PYTHON"):
    cd_sweeps = cd_sweeps_numpy
    KERNEL_BACKEND = "numpy"
else:
    try:
        from ._cdcore import cd_sweeps  # type: ignore[no-redef]

        KERNEL_BACKEND = "compiled"
    except ImportError:
        cd_sweeps = cd_sweeps_numpy
        KERNEL_BACKEND = "numpy"
