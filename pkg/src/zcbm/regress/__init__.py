from .kernels import KERNEL_BACKEND
from .kkt import kkt_tolerance, kkt_violation, satisfies_kkt
from .solvers import (
    elastic_net_cd,
    htp,
    lasso_cd,
    least_squares,
    similarity_weights,
    soft_threshold,
)
from .types import ConceptWeights, RegressionProblem

__all__ = [
    "KERNEL_BACKEND",
    "ConceptWeights",
    "RegressionProblem",
    "elastic_net_cd",
    "htp",
    "kkt_tolerance",
    "kkt_violation",
    "lasso_cd",
    "least_squares",
    "satisfies_kkt",
    "similarity_weights",
    "soft_threshold",
]
