"""Class sets: label ids, names, prompts, and their embeddings."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import EmptyClassSetError
from ..vecstore.provider import ProviderConfig, fetch_embeddings
from ..vecstore.types import EmbeddingMatrix

DEFAULT_PROMPT = "a photo of {name}"


@dataclass
class ClassLabel:
    label_id: int
    name: str
    prompt: str


@dataclass
class ClassSet:
    labels: list[ClassLabel]
    embeddings: EmbeddingMatrix

    def __post_init__(self):
        ids = [lab.label_id for lab in self.labels]
        if len(set(ids)) != len(ids):
            raise ValueError("label_ids must be distinct")
        if len(self.labels) != self.embeddings.count:
            raise ValueError("one embedding row per class is required")

    @property
    def count(self) -> int:
        return len(self.labels)

    @property
    def dim(self) -> int:
        return self.embeddings.dim

    def label_ids(self) -> np.ndarray:
        return np.asarray([lab.label_id for lab in self.labels], dtype=np.int64)

    @classmethod
    def from_arrays(cls, names: list[str], data: np.ndarray) -> "ClassSet":
        labels = [
            ClassLabel(label_id=i, name=n, prompt=DEFAULT_PROMPT.format(name=n))
            for i, n in enumerate(names)
        ]
        return cls(labels=labels, embeddings=EmbeddingMatrix(data, normalized=True))


def read_class_labels(path) -> list[ClassLabel]:
    """Parse the class-set JSON file: [{"label_id", "name", "prompt"?}, ...]."""
    entries = json.loads(Path(path).read_text())
    labels = []
    for entry in entries:
        name = entry["name"]
        prompt = entry.get("prompt") or DEFAULT_PROMPT.format(name=name)
        labels.append(ClassLabel(label_id=int(entry["label_id"]), name=name,
                                 prompt=prompt))
    if not labels:
        raise EmptyClassSetError(f"{path}: no classes defined")
    return labels


def load_class_set(path, embeddings: EmbeddingMatrix | None = None,
                   provider: ProviderConfig | None = None) -> ClassSet:
    """Load labels and attach embeddings, fetching prompts if needed."""
    labels = read_class_labels(path)
    if embeddings is None:
        if provider is None:
            raise ValueError("either embeddings or a provider is required")
        embeddings = fetch_embeddings(provider, [lab.prompt for lab in labels])
    return ClassSet(labels=labels, embeddings=embeddings)
