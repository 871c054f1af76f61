from .exact import RetrievalSet, topk_exact, topk_rows
from .ivf import IvfIndex, build_ivf, load_ivf, save_ivf, topk_ivf

__all__ = [
    "IvfIndex",
    "RetrievalSet",
    "build_ivf",
    "load_ivf",
    "save_ivf",
    "topk_exact",
    "topk_ivf",
    "topk_rows",
]
