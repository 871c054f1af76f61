"""Training-free concept-bottleneck inference over precomputed embeddings."""

__version__ = "0.1.0"
