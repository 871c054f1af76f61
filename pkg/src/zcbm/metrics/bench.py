"""Inference timing harness: per-stage wall clock across a k grid.

Samples are interleaved round-robin across the k grid so slow drifts and
noise bursts hit every k equally; the first `warmup` rounds per k are
discarded, and samples whose total indicates host preemption are excluded
before averaging. Stages are timed contiguously, so retrieval +
regression + label accounts for the measured total.
"""
from __future__ import annotations

import csv
import time
from dataclasses import dataclass

import numpy as np

from ..bank.build import ConceptBank
from ..pipeline.classes import ClassSet
from ..pipeline.infer import SolverConfig, argmax_label, class_cosines
from ..regress.types import RegressionProblem
from ..retrieval.exact import topk_exact
from .scores import top1_accuracy

DEFAULT_K_GRID = (128, 256, 512, 1024, 2048)
WARMUP_RUNS = 3


@dataclass
class BenchRow:
    k: int
    total_ms: float
    retrieval_ms: float
    regression_ms: float
    label_ms: float
    accuracy: float | None


def benchmark_inference(bank: ConceptBank, samples, k_grid=DEFAULT_K_GRID,
                        solver_cfg: SolverConfig | None = None,
                        classes: ClassSet | None = None,
                        truths=None, warmup: int = WARMUP_RUNS,
                        raw_sink: dict | None = None) -> list[BenchRow]:
    """Stage timings per k, averaged over samples after warm-up rounds.

    When raw_sink is given it receives, per k, the (rounds x 4) array of
    raw stage timings in ms (retrieval, regression, label, total) so
    callers can run paired per-round statistics.
    """
    if not k_grid:
        raise ValueError("k_grid must be non-empty")
    cfg = solver_cfg or SolverConfig()
    samples = [np.asarray(s, dtype=np.float64) for s in samples]
    if len(samples) <= warmup:
        raise ValueError("need more samples than warm-up runs")

    timings: dict[int, list[tuple[float, float, float, float]]] = {
        int(k): [] for k in k_grid
    }
    labels: dict[int, list[int]] = {int(k): [] for k in k_grid}
    grid = [int(k) for k in k_grid]
    for i, x in enumerate(samples):
        # rotate the k order each round so cache/position effects hit
        # every k equally
        rotation = grid[i % len(grid):] + grid[: i % len(grid)]
        for k in rotation:
            t0 = time.perf_counter()
            retrieval = topk_exact(x, bank, k)
            t1 = time.perf_counter()
            candidates = bank.embeddings.data[retrieval.indices].astype(np.float64)
            problem = RegressionProblem(concepts=candidates, target=x)
            weights = cfg.solve(problem)
            reconstructed = candidates.T @ weights.w
            t2 = time.perf_counter()
            if classes is not None:
                scores = class_cosines(
                    x if np.linalg.norm(reconstructed) < 1e-10 else reconstructed,
                    classes,
                )
                labels[k].append(argmax_label(scores, classes))
            t3 = time.perf_counter()
            if i >= warmup:
                timings[k].append((t1 - t0, t2 - t1, t3 - t2, t3 - t0))

    rows = []
    for k in k_grid:
        k = int(k)
        if raw_sink is not None:
            raw_sink[k] = np.asarray(timings[k]) * 1000.0
        stage = _exclude_preempted(np.asarray(timings[k]) * 1000.0)
        accuracy = None
        if classes is not None and truths is not None:
            accuracy = top1_accuracy(labels[k], truths)
        rows.append(BenchRow(
            k=k,
            total_ms=float(stage[:, 3].mean()),
            retrieval_ms=float(stage[:, 0].mean()),
            regression_ms=float(stage[:, 1].mean()),
            label_ms=float(stage[:, 2].mean()),
            accuracy=accuracy,
        ))
    return rows


def _exclude_preempted(stage: np.ndarray, factor: float = 1.5) -> np.ndarray:
    """Drop samples whose total blew past 1.5x the median total: those are
    host-preemption spikes, not workload. Whole rows go, so the per-sample
    stage-sum identity survives averaging. At least half always remains."""
    totals = stage[:, 3]
    cut = factor * float(np.median(totals))
    return stage[totals <= cut]


def write_bench_csv(rows: list[BenchRow], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["k", "total_ms", "retrieval_ms", "regression_ms", "label_ms",
             "accuracy"]
        )
        for row in rows:
            writer.writerow([
                row.k, repr(row.total_ms), repr(row.retrieval_ms),
                repr(row.regression_ms), repr(row.label_ms),
                "" if row.accuracy is None else repr(row.accuracy),
            ])
