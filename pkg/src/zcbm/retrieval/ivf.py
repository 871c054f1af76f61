"""Inverted-file approximate retrieval for million-scale banks.

Spherical k-means partitions the bank; a query probes the n_probe
nearest centroids and runs exact selection over the union of their
posting lists. Probing all lists reproduces exact search.
"""
from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import EmptyBankError
from ..vecstore.io import load_matrix, save_matrix
from ..vecstore.types import EmbeddingMatrix
from .exact import RetrievalSet, topk_rows

KMEANS_MAX_ITER = 25
KMEANS_MOVE_TOL = 1e-4


@dataclass
class IvfIndex:
    centroids: EmbeddingMatrix
    postings: list[np.ndarray]   # int64 row ids, one array per centroid
    n_probe: int = 1
    seed: int = 0

    @property
    def n_list(self) -> int:
        return self.centroids.count


def _assign(rows64: np.ndarray, centroids64: np.ndarray) -> np.ndarray:
    # max-cosine centroid per row; ties resolve to the lowest centroid index
    sims = rows64 @ centroids64.T
    return np.argmax(sims, axis=1)


def build_ivf(bank, n_list: int, seed: int = 0) -> IvfIndex:
    """Spherical k-means index over the bank rows."""
    rows = bank.embeddings.data
    n = rows.shape[0]
    if n == 0:
        raise EmptyBankError("cannot index an empty bank")
    if not 1 <= n_list <= n:
        raise ValueError(f"n_list must be in [1, {n}]")
    rows64 = rows.astype(np.float64)
    rng = np.random.default_rng(seed)
    centroids = rows64[rng.choice(n, size=n_list, replace=False)].copy()

    for _ in range(KMEANS_MAX_ITER):
        labels = _assign(rows64, centroids)
        moved = 0.0
        new_centroids = centroids.copy()
        for c in range(n_list):
            members = rows64[labels == c]
            if members.shape[0] == 0:
                # re-seed empty clusters deterministically from the data
                new_centroids[c] = rows64[int(rng.integers(0, n))]
            else:
                mean = members.mean(axis=0)
                norm = np.linalg.norm(mean)
                if norm > 0:
                    new_centroids[c] = mean / norm
            moved = max(moved, float(np.linalg.norm(new_centroids[c] - centroids[c])))
        centroids = new_centroids
        if moved < KMEANS_MOVE_TOL:
            break

    labels = _assign(rows64, centroids)
    postings = [
        np.flatnonzero(labels == c).astype(np.int64) for c in range(n_list)
    ]
    return IvfIndex(
        centroids=EmbeddingMatrix(centroids.astype(np.float32), normalized=True),
        postings=postings,
        seed=seed,
    )


def topk_ivf(query, bank, index: IvfIndex, k: int,
             n_probe: int | None = None) -> RetrievalSet:
    """Exact top-k restricted to the n_probe nearest posting lists."""
    if bank.embeddings.count == 0:
        raise EmptyBankError("cannot retrieve from an empty bank")
    probe = index.n_probe if n_probe is None else n_probe
    probe = max(1, min(probe, index.n_list))
    nearest = topk_rows(query, index.centroids.data, probe)
    candidate_ids = np.concatenate([index.postings[c] for c in nearest.indices])
    if candidate_ids.size == 0:
        raise EmptyBankError("probed posting lists are empty")
    rows = bank.embeddings.data[candidate_ids]
    return topk_rows(query, rows, k, row_ids=candidate_ids)


def save_ivf(index: IvfIndex, directory) -> Path:
    """Persist as manifest.json + centroid matrix + length-prefixed postings."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    save_matrix(index.centroids, directory / "centroids.zcbm")
    with open(directory / "postings.bin", "wb") as fh:
        for posting in index.postings:
            fh.write(struct.pack("<I", posting.size))
            fh.write(posting.astype("<u4").tobytes())
    manifest = {
        "n_list": index.n_list,
        "seed": index.seed,
        "dim": index.centroids.dim,
        "n_probe": index.n_probe,
    }
    path = directory / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def load_ivf(directory) -> IvfIndex:
    directory = Path(directory)
    manifest = json.loads((directory / "manifest.json").read_text())
    centroids = load_matrix(directory / "centroids.zcbm")
    postings: list[np.ndarray] = []
    raw = (directory / "postings.bin").read_bytes()
    off = 0
    for _ in range(manifest["n_list"]):
        (size,) = struct.unpack_from("<I", raw, off)
        off += 4
        ids = np.frombuffer(raw, dtype="<u4", count=size, offset=off)
        off += 4 * size
        postings.append(ids.astype(np.int64))
    return IvfIndex(
        centroids=centroids,
        postings=postings,
        n_probe=int(manifest.get("n_probe", 1)),
        seed=int(manifest["seed"]),
    )
