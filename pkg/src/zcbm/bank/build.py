"""Concept bank construction, filtering, and persistence."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from ..errors import DimensionMismatchError, EmptyBankError
from ..retrieval.exact import topk_rows
from ..vecstore.io import load_matrix, load_vocab, save_matrix, save_vocab
from ..vecstore.provider import ProviderConfig, fetch_embeddings
from ..vecstore.types import EmbeddingMatrix
from .captions import TaggedCaption
from .chunker import extract_noun_phrases

DEFAULT_MAX_CHARS = 30
DEFAULT_MAX_WORDS = 5
DEFAULT_DEDUP_THRESHOLD = 0.9
DEFAULT_DEDUP_TOP_M = 64
DEFAULT_CLASS_THRESHOLD = 0.85


@dataclass
class BankManifest:
    name: str
    dim: int
    count: int
    sources: list[str]
    filters_applied: dict
    embedding_file: str = "embeddings.zcbm"
    vocab_file: str = "vocab.txt"

    def to_json(self) -> str:
        return json.dumps(self.__dict__, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "BankManifest":
        return cls(**json.loads(text))


@dataclass
class ConceptBank:
    vocab: list[str]
    embeddings: EmbeddingMatrix
    manifest: BankManifest

    def __post_init__(self):
        if len(self.vocab) != self.embeddings.count:
            raise ValueError(
                f"vocab size {len(self.vocab)} != embedding rows {self.embeddings.count}"
            )

    @property
    def count(self) -> int:
        return len(self.vocab)

    @property
    def dim(self) -> int:
        return self.embeddings.dim

    def subset(self, keep: np.ndarray) -> "ConceptBank":
        keep = np.asarray(keep)
        vocab = [self.vocab[i] for i in keep]
        emb = EmbeddingMatrix(self.embeddings.data[keep].copy(),
                              normalized=self.embeddings.normalized)
        manifest = BankManifest(
            name=self.manifest.name,
            dim=emb.dim,
            count=emb.count,
            sources=list(self.manifest.sources),
            filters_applied=dict(self.manifest.filters_applied),
        )
        return ConceptBank(vocab=vocab, embeddings=emb, manifest=manifest)


@dataclass
class BankBuildConfig:
    name: str = "bank"
    max_chars: int = DEFAULT_MAX_CHARS
    max_words: int = DEFAULT_MAX_WORDS
    dedup_threshold: float = DEFAULT_DEDUP_THRESHOLD
    dedup_top_m: int = DEFAULT_DEDUP_TOP_M
    class_filter_threshold: float = DEFAULT_CLASS_THRESHOLD
    min_count: int = 1
    blocklist: frozenset[str] = field(default_factory=frozenset)


def filter_length(concepts: Iterable[str], max_chars: int, max_words: int) -> list[str]:
    """Keep concepts within the character and word budgets."""
    if max_chars < 1 or max_words < 1:
        raise ValueError("limits must be >= 1")
    return [
        c for c in concepts
        if len(c) <= max_chars and len(c.split(" ")) <= max_words
    ]


def dedup_similar(bank: ConceptBank, threshold: float = DEFAULT_DEDUP_THRESHOLD,
                  top_m: int = DEFAULT_DEDUP_TOP_M) -> ConceptBank:
    """Greedy near-duplicate removal in ascending vocab order.

    Each surviving concept retrieves its top_m nearest neighbours and
    removes any not-yet-visited one at cosine >= threshold. With top_m
    covering the whole bank this equals the brute-force O(N^2) greedy
    pass in the same order.
    """
    if top_m < 1:
        raise ValueError("top_m must be >= 1")
    n = bank.count
    if n == 0:
        return bank
    rows = bank.embeddings.data
    keep = np.ones(n, dtype=bool)
    fetch = min(top_m + 1, n)  # +1 because the concept retrieves itself
    for i in range(n):
        if not keep[i]:
            continue
        hits = topk_rows(rows[i], rows, fetch)
        for j, score in zip(hits.indices, hits.scores):
            if j == i or j < i:
                continue
            if score >= threshold and keep[j]:
                keep[j] = False
    out = bank.subset(np.flatnonzero(keep))
    out.manifest.filters_applied["dedup_threshold"] = threshold
    out.manifest.filters_applied["dedup_top_m"] = top_m
    return out


def filter_class_similar(bank: ConceptBank, class_embeddings: EmbeddingMatrix,
                         threshold: float = DEFAULT_CLASS_THRESHOLD) -> ConceptBank:
    """Drop concepts too close to any class embedding."""
    if class_embeddings.count == 0:
        return bank
    if class_embeddings.dim != bank.dim:
        raise DimensionMismatchError(
            f"class dim {class_embeddings.dim} != bank dim {bank.dim}"
        )
    sims = bank.embeddings.data.astype(np.float64) @ \
        class_embeddings.data.astype(np.float64).T
    keep = np.flatnonzero(sims.max(axis=1) < threshold)
    out = bank.subset(keep)
    out.manifest.filters_applied["class_filter_threshold"] = threshold
    return out


def build_bank(corpora: Iterable[tuple[str, Iterator[TaggedCaption]]],
               cfg: BankBuildConfig,
               provider: ProviderConfig,
               class_embeddings: EmbeddingMatrix | None = None,
               stage_counts: dict | None = None) -> ConceptBank:
    """Extract, filter, embed, and dedup concepts from tagged corpora.

    Deterministic for fixed inputs: concepts keep first-seen order
    throughout, and every filter pass is order-preserving.
    """
    sources = []
    counts: dict[str, int] = {}
    seen: dict[str, int] = {}
    ordered: list[str] = []
    raw_total = 0
    for source_name, captions in corpora:
        sources.append(source_name)
        for caption in captions:
            for phrase in extract_noun_phrases(caption):
                raw_total += 1
                if phrase in seen:
                    seen[phrase] += 1
                else:
                    seen[phrase] = 1
                    ordered.append(phrase)
    if not sources:
        raise ValueError("at least one corpus is required")
    counts["raw"] = raw_total
    counts["unique"] = len(ordered)

    if cfg.min_count > 1:
        ordered = [c for c in ordered if seen[c] >= cfg.min_count]
    counts["min_count"] = len(ordered)

    ordered = filter_length(ordered, cfg.max_chars, cfg.max_words)
    counts["length"] = len(ordered)

    if cfg.blocklist:
        blocked = {b.casefold() for b in cfg.blocklist}
        ordered = [c for c in ordered if c not in blocked]
    counts["blocklist"] = len(ordered)

    if not ordered:
        raise EmptyBankError("no concepts survived extraction and filtering")

    embeddings = fetch_embeddings(provider, ordered)
    manifest = BankManifest(
        name=cfg.name,
        dim=embeddings.dim,
        count=len(ordered),
        sources=sources,
        filters_applied={
            "max_chars": cfg.max_chars,
            "max_words": cfg.max_words,
            "min_count": cfg.min_count,
        },
    )
    bank = ConceptBank(vocab=ordered, embeddings=embeddings, manifest=manifest)

    bank = dedup_similar(bank, cfg.dedup_threshold, cfg.dedup_top_m)
    counts["dedup"] = bank.count

    if class_embeddings is not None:
        bank = filter_class_similar(bank, class_embeddings,
                                    cfg.class_filter_threshold)
    counts["class_filter"] = bank.count

    if bank.count == 0:
        raise EmptyBankError("no concepts survived filtering")
    bank.manifest.count = bank.count
    if stage_counts is not None:
        stage_counts.update(counts)
    return bank


def save_bank(bank: ConceptBank, directory) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    save_matrix(bank.embeddings, directory / bank.manifest.embedding_file)
    save_vocab(bank.vocab, directory / bank.manifest.vocab_file)
    manifest_path = directory / "manifest.json"
    bank.manifest.dim = bank.dim
    bank.manifest.count = bank.count
    manifest_path.write_text(bank.manifest.to_json())
    return manifest_path


def load_bank(directory) -> ConceptBank:
    directory = Path(directory)
    manifest = BankManifest.from_json((directory / "manifest.json").read_text())
    embeddings = load_matrix(directory / manifest.embedding_file)
    vocab = load_vocab(directory / manifest.vocab_file)
    return ConceptBank(vocab=vocab, embeddings=embeddings, manifest=manifest)


def bank_from_arrays(vocab: list[str], data: np.ndarray,
                     name: str = "bank") -> ConceptBank:
    """Assemble an in-memory bank from already-normalized rows."""
    emb = EmbeddingMatrix(data, normalized=True)
    manifest = BankManifest(
        name=name, dim=emb.dim, count=emb.count, sources=[], filters_applied={}
    )
    return ConceptBank(vocab=list(vocab), embeddings=emb, manifest=manifest)
