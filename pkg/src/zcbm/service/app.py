"""HTTP facade for inference and intervention sessions.

JSON over HTTP/1.1; response floats are rounded to 9 significant digits
(enough to round-trip 32-bit values) and bodies are emitted with sorted
keys, so identical requests produce byte-identical responses.
"""
from __future__ import annotations

import json
from typing import Any

import numpy as np
from fastapi import FastAPI, Request, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from ..bank.build import ConceptBank
from ..errors import ExpiredSessionError, ProviderError, UnknownSessionError
from ..pipeline.classes import ClassSet
from ..pipeline.infer import DEFAULT_K, Prediction, SolverConfig, infer
from ..pipeline.session import DEFAULT_TTL_SECONDS, InterventionSession, SessionStore
from ..retrieval.exact import topk_exact
from ..vecstore.provider import ProviderConfig, fetch_embeddings


class ApiHttpError(Exception):
    def __init__(self, status: int, code: str, message: str, detail=None):
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail


def round9(value: Any) -> Any:
    """Round floats to 9 significant digits, recursively."""
    if isinstance(value, float):
        return float(f"{value:.9g}")
    if isinstance(value, dict):
        return {k: round9(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [round9(v) for v in value]
    return value


def json_response(payload: Any, status: int = 200) -> Response:
    body = json.dumps(round9(payload), sort_keys=True, separators=(",", ":"))
    return Response(content=body, status_code=status,
                    media_type="application/json")


class InferRequest(BaseModel):
    embedding: list[float]
    k: int | None = None
    solver: str | None = None
    lam: float | None = Field(default=None, alias="lambda")
    l2: float | None = None
    s: int | None = None

    model_config = {"populate_by_name": True}


class EditRequest(BaseModel):
    op: str
    concept: str | None = None
    index: int | None = None


def _solver_config(req: InferRequest, defaults: SolverConfig) -> SolverConfig:
    cfg = SolverConfig(
        name=req.solver or defaults.name,
        l1=req.lam if req.lam is not None else defaults.l1,
        l2=req.l2 if req.l2 is not None else defaults.l2,
        s=req.s if req.s is not None else defaults.s,
    )
    return cfg


def prediction_payload(p: Prediction) -> dict:
    return {
        "label_id": int(p.label_id),
        "class_scores": [float(s) for s in p.class_scores],
        "concepts": [
            {"text": text, "bank_index": int(idx), "weight": float(w)}
            for text, idx, w in p.concepts
        ],
        "fallback": bool(p.fallback),
    }


def session_payload(session: InterventionSession) -> dict:
    return {
        "session_id": session.session_id,
        "prediction": prediction_payload(session.current),
        "concepts": [
            {
                "text": c.text,
                "bank_index": int(c.bank_index),
                "weight": float(c.weight),
                "source": c.source,
                "deleted": bool(c.deleted),
            }
            for c in session.concepts
        ],
        "history": [
            {k: (float(v) if isinstance(v, float) else v) for k, v in entry.items()}
            for entry in session.history
        ],
    }


def create_app(bank: ConceptBank, classes: ClassSet,
               provider: ProviderConfig | None = None,
               default_solver: SolverConfig | None = None,
               session_ttl: float = DEFAULT_TTL_SECONDS,
               cors_origins: tuple[str, ...] = (),
               ui_dir=None) -> FastAPI:
    app = FastAPI(title="zcbm service", version="1.0.0")
    defaults = default_solver or SolverConfig()
    store = SessionStore(classes, ttl_seconds=session_ttl)
    app.state.session_store = store

    if cors_origins:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware, allow_origins=list(cors_origins),
            allow_methods=["*"], allow_headers=["*"],
        )

    @app.exception_handler(ApiHttpError)
    async def _api_error(_req: Request, exc: ApiHttpError):
        payload = {"code": exc.code, "message": exc.message}
        if exc.detail is not None:
            payload["detail"] = exc.detail
        return json_response(payload, status=exc.status)

    def parse_embedding(values: list[float]) -> np.ndarray:
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim != 1 or arr.shape[0] != bank.dim:
            raise ApiHttpError(
                400, "dimension_mismatch",
                f"embedding must have length {bank.dim}, got {arr.shape[0] if arr.ndim == 1 else arr.shape}",
            )
        if not np.all(np.isfinite(arr)):
            raise ApiHttpError(422, "bad_request",
                               "embedding contains non-finite values")
        return arr

    def run_infer(req: InferRequest) -> Prediction:
        x = parse_embedding(req.embedding)
        k = req.k if req.k is not None else DEFAULT_K
        if k < 1:
            raise ApiHttpError(400, "bad_request", "k must be >= 1")
        try:
            return infer(x, bank, classes, k=k,
                         solver_cfg=_solver_config(req, defaults))
        except ValueError as exc:
            raise ApiHttpError(400, "bad_request", str(exc))

    def embed_text(text: str) -> np.ndarray:
        folded = text.casefold()
        if provider is not None:
            try:
                return fetch_embeddings(provider, [text]).data[0].astype(np.float64)
            except ProviderError as exc:
                raise ApiHttpError(502, "provider_error", str(exc))
        for i, entry in enumerate(bank.vocab):
            if entry.casefold() == folded:
                return bank.embeddings.data[i].astype(np.float64)
        raise ApiHttpError(
            502, "provider_error",
            "no embedding provider configured and concept not in bank vocabulary",
        )

    @app.get("/v1/healthz")
    def healthz():
        return json_response(
            {"status": "ok", "bank_count": bank.count, "dim": bank.dim}
        )

    @app.post("/v1/infer")
    def post_infer(req: InferRequest):
        return json_response(prediction_payload(run_infer(req)))

    @app.post("/v1/sessions")
    def post_sessions(req: InferRequest):
        session = store.create(run_infer(req))
        return json_response(session_payload(session))

    @app.get("/v1/sessions/{session_id}")
    def get_session(session_id: str):
        return json_response(session_payload(_get_session(session_id)))

    def _get_session(session_id: str) -> InterventionSession:
        try:
            return store.get(session_id)
        except UnknownSessionError as exc:
            raise ApiHttpError(404, "not_found", str(exc))
        except ExpiredSessionError as exc:
            raise ApiHttpError(410, "expired", str(exc))

    @app.post("/v1/sessions/{session_id}/edits")
    def post_edit(session_id: str, req: EditRequest):
        _get_session(session_id)
        embedding = None
        if req.op == "insert":
            if not req.concept:
                raise ApiHttpError(400, "bad_request",
                                   "insert requires a concept text")
            embedding = embed_text(req.concept)
        try:
            session = store.edit(session_id, req.op, index=req.index,
                                 concept=req.concept, embedding=embedding)
        except ValueError as exc:
            raise ApiHttpError(400, "bad_request", str(exc))
        return json_response(session_payload(session))

    @app.post("/v1/sessions/{session_id}/recompute")
    def post_recompute(session_id: str):
        _get_session(session_id)
        session = store.recompute(session_id)
        return json_response(session_payload(session))

    @app.get("/v1/bank/search")
    def bank_search(q: str, n: int = 10):
        if not q:
            raise ApiHttpError(400, "bad_request", "q must be non-empty")
        if n < 1:
            raise ApiHttpError(400, "bad_request", "n must be >= 1")
        query = embed_text(q)
        hits = topk_exact(query, bank, n)
        return json_response({
            "results": [
                {
                    "text": bank.vocab[int(i)],
                    "bank_index": int(i),
                    "score": float(s),
                }
                for i, s in zip(hits.indices, hits.scores)
            ]
        })

    if ui_dir is not None:
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def export_openapi(app: FastAPI) -> str:
    return json.dumps(app.openapi(), indent=2, sort_keys=True) + "\n"
