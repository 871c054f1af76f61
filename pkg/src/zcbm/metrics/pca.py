"""Two-component PCA projection for embedding-set visualization export."""
from __future__ import annotations

import csv

import numpy as np

from ..errors import DegenerateVarianceError


def pca2d(groups: dict[str, np.ndarray]) -> dict[str, np.ndarray]:
    """Project all groups onto the top-2 principal axes of the pooled data.

    Components follow a deterministic sign convention: the loading with
    the largest magnitude is made positive.
    """
    names = list(groups)
    pooled = np.vstack([np.asarray(groups[n], dtype=np.float64) for n in names])
    if pooled.shape[0] < 2:
        raise ValueError("need at least two points in total")
    centered = pooled - pooled.mean(axis=0, keepdims=True)
    if not np.any(np.abs(centered) > 0):
        raise DegenerateVarianceError("pooled variance is zero")
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    axes = vt[:2]
    if axes.shape[0] < 2:  # 1-D data: pad a zero second axis
        axes = np.vstack([axes, np.zeros_like(axes[0])])
    for i in range(2):
        pivot = int(np.argmax(np.abs(axes[i])))
        if axes[i, pivot] < 0:
            axes[i] = -axes[i]

    out = {}
    offset = 0
    for name in names:
        block = np.asarray(groups[name], dtype=np.float64)
        c = block - pooled.mean(axis=0, keepdims=True)
        out[name] = c @ axes.T
        offset += block.shape[0]
    return out


def write_pca_csv(coords: dict[str, np.ndarray], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["group", "x", "y"])
        for name, block in coords.items():
            for row in block:
                writer.writerow([name, repr(float(row[0])), repr(float(row[1]))])
