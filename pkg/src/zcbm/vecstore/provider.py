"""Client for an external text-embedding service.

Wire contract: POST JSON {"texts": [...]} to the endpoint, receive
{"embeddings": [[...], ...]} with one row per text, in order. The prompt
template is applied client-side before the request.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np
import requests

from ..errors import (
    ProviderBadResponseError,
    ProviderTimeoutError,
    ProviderUnreachableError,
)
from .types import EmbeddingMatrix, normalize_rows

MAX_RETRIES = 3


@dataclass
class ProviderConfig:
    endpoint: str
    batch_size: int = 64
    timeout: float = 30.0
    prompt_template: str = "[TEXT]"
    retry_backoff: float = 0.5

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.prompt_template.count("[TEXT]") != 1:
            raise ValueError("prompt_template must contain [TEXT] exactly once")

    def render(self, text: str) -> str:
        return self.prompt_template.replace("[TEXT]", text)


def _post_batch(cfg: ProviderConfig, session: requests.Session, prompts: list[str]):
    last_exc = None
    for attempt in range(MAX_RETRIES + 1):
        if attempt:
            time.sleep(cfg.retry_backoff * 2 ** (attempt - 1))
        try:
            resp = session.post(
                cfg.endpoint, json={"texts": prompts}, timeout=cfg.timeout
            )
        except requests.exceptions.Timeout as exc:
            last_exc = ProviderTimeoutError(f"provider timed out: {exc}")
            continue
        except requests.exceptions.RequestException as exc:
            last_exc = ProviderUnreachableError(f"provider unreachable: {exc}")
            continue
        if resp.status_code >= 500:
            last_exc = ProviderUnreachableError(
                f"provider returned {resp.status_code}"
            )
            continue
        if resp.status_code != 200:
            raise ProviderBadResponseError(
                f"provider returned {resp.status_code}: {resp.text[:200]}"
            )
        try:
            body = resp.json()
            rows = body["embeddings"]
        except (ValueError, KeyError, TypeError) as exc:
            raise ProviderBadResponseError(f"malformed provider response: {exc}")
        return rows
    raise last_exc


def fetch_embeddings(cfg: ProviderConfig, texts) -> EmbeddingMatrix:
    """Fetch one normalized embedding row per text, preserving input order.

    Requests go out in batches of cfg.batch_size; transient failures
    (connection errors, timeouts, 5xx) are retried up to 3 times with
    exponential backoff.
    """
    texts = list(texts)
    if not texts:
        raise ValueError("texts must be non-empty")
    session = requests.Session()
    chunks: list[np.ndarray] = []
    dim = None
    for start in range(0, len(texts), cfg.batch_size):
        batch = texts[start : start + cfg.batch_size]
        prompts = [cfg.render(t) for t in batch]
        rows = _post_batch(cfg, session, prompts)
        if not isinstance(rows, list) or len(rows) != len(batch):
            got = len(rows) if isinstance(rows, list) else type(rows).__name__
            raise ProviderBadResponseError(
                f"expected {len(batch)} embeddings, got {got}"
            )
        try:
            arr = np.asarray(rows, dtype=np.float64)
        except ValueError as exc:
            raise ProviderBadResponseError(f"ragged embedding rows: {exc}")
        if arr.ndim != 2:
            raise ProviderBadResponseError("embeddings are not a rank-2 array")
        if dim is None:
            dim = arr.shape[1]
        elif arr.shape[1] != dim:
            raise ProviderBadResponseError(
                f"dimension changed across batches: {arr.shape[1]} != {dim}"
            )
        chunks.append(arr)
    stacked = np.vstack(chunks)
    return EmbeddingMatrix(normalize_rows(stacked), normalized=True)
