from .calibrate import CalibrationResult, calibrate_lambda
from .classes import ClassLabel, ClassSet, load_class_set, read_class_labels
from .infer import (
    Prediction,
    SolverConfig,
    infer,
    zero_shot_baseline,
)
from .intervene import intervene_delete, intervene_insert
from .session import InterventionSession, SessionStore

__all__ = [
    "CalibrationResult",
    "ClassLabel",
    "ClassSet",
    "InterventionSession",
    "Prediction",
    "SessionStore",
    "SolverConfig",
    "calibrate_lambda",
    "infer",
    "intervene_delete",
    "intervene_insert",
    "load_class_set",
    "read_class_labels",
    "zero_shot_baseline",
]
