import hashlib
import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import numpy as np
import pytest

from zcbm.bank import bank_from_arrays
from zcbm.pipeline import ClassSet


def fake_embed(text: str, dim: int = 16) -> np.ndarray:
    """Deterministic unit vector derived from the text, independent of order."""
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    seed = int.from_bytes(digest[:8], "little")
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim)
    return v / np.linalg.norm(v)


class FakeProvider:
    """In-process embedding provider speaking the JSON wire contract.

    Failure injection: set fail_next to answer that many requests with
    HTTP 500, wrong_count/wrong_dim to corrupt one response, or delay to
    stall before answering.
    """

    def __init__(self, dim: int = 16):
        self.dim = dim
        self.requests: list[list[str]] = []
        self.fail_next = 0
        self.wrong_count = False
        self.wrong_dim = False
        self.delay = 0.0
        provider = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self):
                length = int(self.headers.get("Content-Length", "0"))
                body = json.loads(self.rfile.read(length))
                texts = body["texts"]
                provider.requests.append(list(texts))
                if provider.delay:
                    time.sleep(provider.delay)
                if provider.fail_next > 0:
                    provider.fail_next -= 1
                    self.send_response(500)
                    self.end_headers()
                    return
                rows = [fake_embed(t, provider.dim).tolist() for t in texts]
                if provider.wrong_count and rows:
                    rows = rows[:-1]
                    provider.wrong_count = False
                if provider.wrong_dim and rows:
                    rows[0] = rows[0][:-1]
                    provider.wrong_dim = False
                payload = json.dumps({"embeddings": rows}).encode()
                self.send_response(200)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(payload)))
                self.end_headers()
                self.wfile.write(payload)

            def log_message(self, *args):
                pass

        self._server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self._thread = threading.Thread(target=self._server.serve_forever,
                                        daemon=True)
        self._thread.start()
        self.endpoint = f"http://127.0.0.1:{self._server.server_port}/embed"

    def close(self):
        self._server.shutdown()
        self._server.server_close()


@pytest.fixture
def fake_provider():
    provider = FakeProvider()
    yield provider
    provider.close()


def make_orthonormal_fixture(seed: int = 20240901, d: int = 64,
                             n_ortho: int = 64, n_distract: int = 936,
                             n_classes: int = 10, n_samples: int = 200):
    """Bank of orthonormal concepts plus random distractors, with inputs
    composed of three orthonormal concepts at weights in [0.3, 1]."""
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.standard_normal((d, d)))
    ortho = q.T[:n_ortho]
    distract = rng.standard_normal((n_distract, d))
    distract /= np.linalg.norm(distract, axis=1, keepdims=True)
    rows = np.vstack([ortho, distract]).astype(np.float32)
    vocab = [f"true concept {i}" for i in range(n_ortho)] + [
        f"distractor {i}" for i in range(n_distract)
    ]
    bank = bank_from_arrays(vocab, rows, name="orthonormal-fixture")

    combos: list[tuple[int, ...]] = []
    while len(combos) < n_classes:
        combo = tuple(sorted(rng.choice(n_ortho, size=3, replace=False).tolist()))
        if combo not in combos:
            combos.append(combo)
    protos = np.vstack([
        ortho[list(c)].sum(axis=0) / np.linalg.norm(ortho[list(c)].sum(axis=0))
        for c in combos
    ]).astype(np.float32)
    classes = ClassSet.from_arrays([f"class {i}" for i in range(n_classes)],
                                   protos)

    samples, truths, components = [], [], []
    for _ in range(n_samples):
        ci = int(rng.integers(0, n_classes))
        combo = combos[ci]
        weights = rng.uniform(0.3, 1.0, size=3)
        samples.append((weights[:, None] * ortho[list(combo)]).sum(axis=0))
        truths.append(ci)
        components.append((combo, weights))
    return {
        "bank": bank,
        "classes": classes,
        "samples": samples,
        "truths": truths,
        "components": components,
        "ortho": ortho,
        "combos": combos,
    }


@pytest.fixture(scope="session")
def orthonormal_fixture():
    return make_orthonormal_fixture()


def random_unit_rows(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    rows = rng.standard_normal((n, d))
    return rows / np.linalg.norm(rows, axis=1, keepdims=True)
