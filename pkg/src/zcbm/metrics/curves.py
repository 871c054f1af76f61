"""Intervention curves: accuracy as concepts are deleted or inserted."""
from __future__ import annotations

import csv
from dataclasses import dataclass

from ..pipeline.classes import ClassSet
from ..pipeline.infer import Prediction
from ..pipeline.intervene import intervene_delete, intervene_insert
from .scores import top1_accuracy

DEFAULT_RATIOS = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)


@dataclass
class CurvePoint:
    order: str
    x: float
    accuracy: float


def deletion_curve(predictions: list[Prediction], truths, classes: ClassSet,
                   orders=("ascending", "descending", "random"),
                   ratios=DEFAULT_RATIOS, seed: int = 0) -> list[CurvePoint]:
    """Mean top-1 accuracy per (order, ratio) after deletion."""
    points = []
    for order in orders:
        for ratio in ratios:
            labels = []
            for i, p in enumerate(predictions):
                edited = intervene_delete(
                    p, order, ratio, classes,
                    seed=(seed + i) if order == "random" else None,
                )
                labels.append(edited.label_id)
            points.append(CurvePoint(order=order, x=float(ratio),
                                     accuracy=top1_accuracy(labels, truths)))
    return points


def insertion_curve(predictions: list[Prediction], gt_lists, truths,
                    classes: ClassSet, counts=(0, 1, 2, 3)) -> list[CurvePoint]:
    """Mean top-1 accuracy after inserting the first m ground-truth concepts.

    gt_lists holds, per prediction, an ordered list of (text, embedding).
    """
    points = []
    for m in counts:
        labels = []
        for p, gts in zip(predictions, gt_lists):
            if m == 0:
                labels.append(p.label_id)
            else:
                edited = intervene_insert(p, list(gts[:m]), classes)
                labels.append(edited.label_id)
        points.append(CurvePoint(order="insert", x=float(m),
                                 accuracy=top1_accuracy(labels, truths)))
    return points


def write_curve_csv(points: list[CurvePoint], path, x_name: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["order", x_name, "accuracy"])
        for pt in points:
            writer.writerow([pt.order, repr(pt.x), repr(pt.accuracy)])
