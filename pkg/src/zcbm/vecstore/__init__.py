from .io import load_matrix, load_vocab, save_matrix, save_vocab
from .provider import ProviderConfig, fetch_embeddings
from .types import EmbeddingMatrix, cosine, normalize, normalize_rows

__all__ = [
    "EmbeddingMatrix",
    "ProviderConfig",
    "cosine",
    "fetch_embeddings",
    "load_matrix",
    "load_vocab",
    "normalize",
    "normalize_rows",
    "save_matrix",
    "save_vocab",
]
