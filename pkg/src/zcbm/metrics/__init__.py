from .bench import BenchRow, benchmark_inference, write_bench_csv
from .curves import CurvePoint, deletion_curve, insertion_curve, write_curve_csv
from .pca import pca2d, write_pca_csv
from .scores import (
    EvalReport,
    clip_score,
    concept_coverage,
    inner_redundancy,
    modality_gap,
    sparsity,
    top1_accuracy,
)

__all__ = [
    "BenchRow",
    "CurvePoint",
    "EvalReport",
    "benchmark_inference",
    "clip_score",
    "concept_coverage",
    "deletion_curve",
    "inner_redundancy",
    "insertion_curve",
    "modality_gap",
    "pca2d",
    "sparsity",
    "top1_accuracy",
    "write_bench_csv",
    "write_curve_csv",
    "write_pca_csv",
]
