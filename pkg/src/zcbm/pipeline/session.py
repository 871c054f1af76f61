"""Interactive intervention sessions.

A session pins a base prediction and lets a human toggle deletions,
insert concepts, and recompute. Recompute applies deletion semantics
(zero weights, no re-fit); if any insertion is present the surviving set
is re-fit by least squares against the original input.
"""
from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field

import numpy as np

from ..errors import ExpiredSessionError, UnknownSessionError
from ..regress.solvers import least_squares
from ..regress.types import ConceptWeights, RegressionProblem
from .classes import ClassSet
from .infer import Prediction
from .intervene import _finish

DEFAULT_TTL_SECONDS = 30 * 60


@dataclass
class SessionConcept:
    text: str
    bank_index: int
    weight: float
    embedding: np.ndarray
    source: str  # "retrieved" | "inserted"
    deleted: bool = False


@dataclass
class InterventionSession:
    session_id: str
    base: Prediction
    current: Prediction
    concepts: list[SessionConcept]
    history: list[dict] = field(default_factory=list)
    created_at: float = 0.0
    touched_at: float = 0.0
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def log(self, op: str, **payload) -> None:
        self.history.append({"ts": time.time(), "op": op, **payload})


class SessionStore:
    """In-memory session map with TTL expiry and per-session locking."""

    def __init__(self, classes: ClassSet, ttl_seconds: float = DEFAULT_TTL_SECONDS,
                 clock=time.monotonic):
        self._classes = classes
        self._ttl = ttl_seconds
        self._clock = clock
        self._sessions: dict[str, InterventionSession] = {}
        self._guard = threading.Lock()

    def create(self, prediction: Prediction) -> InterventionSession:
        session = InterventionSession(
            session_id=uuid.uuid4().hex,
            base=prediction,
            current=prediction,
            concepts=[
                SessionConcept(
                    text=text, bank_index=idx, weight=weight,
                    embedding=prediction.active_vectors[i],
                    source="retrieved",
                )
                for i, (text, idx, weight) in enumerate(prediction.concepts)
            ],
            created_at=self._clock(),
            touched_at=self._clock(),
        )
        session.log("create")
        with self._guard:
            self._sessions[session.session_id] = session
        return session

    def get(self, session_id: str) -> InterventionSession:
        with self._guard:
            session = self._sessions.get(session_id)
        if session is None:
            raise UnknownSessionError(f"unknown session {session_id}")
        if self._clock() - session.touched_at > self._ttl:
            with self._guard:
                self._sessions.pop(session_id, None)
            raise ExpiredSessionError(f"session {session_id} expired")
        session.touched_at = self._clock()
        return session

    def sweep(self) -> int:
        now = self._clock()
        with self._guard:
            dead = [
                sid for sid, s in self._sessions.items()
                if now - s.touched_at > self._ttl
            ]
            for sid in dead:
                del self._sessions[sid]
        return len(dead)

    def edit(self, session_id: str, op: str, index: int | None = None,
             concept: str | None = None,
             embedding: np.ndarray | None = None) -> InterventionSession:
        session = self.get(session_id)
        with session.lock:
            if op in ("delete", "restore"):
                if index is None or not 0 <= index < len(session.concepts):
                    raise ValueError(f"edit needs a valid concept index, got {index}")
                session.concepts[index].deleted = (op == "delete")
                session.log(op, index=index, concept=session.concepts[index].text)
            elif op == "insert":
                if not concept or embedding is None:
                    raise ValueError("insert needs a concept text and embedding")
                folded = concept.casefold()
                existing = {c.text.casefold() for c in session.concepts}
                if folded not in existing:
                    session.concepts.append(
                        SessionConcept(
                            text=concept, bank_index=-1, weight=0.0,
                            embedding=np.asarray(embedding, dtype=np.float64),
                            source="inserted",
                        )
                    )
                session.log("insert", concept=concept)
            else:
                raise ValueError(f"unknown edit op {op!r}")
        return session

    def recompute(self, session_id: str) -> InterventionSession:
        session = self.get(session_id)
        with session.lock:
            base = session.base
            survivors = [c for c in session.concepts if not c.deleted]
            has_insertion = any(c.source == "inserted" for c in survivors)
            concept_tuples = [(c.text, c.bank_index, c.weight) for c in survivors]
            if survivors:
                vectors = np.vstack([c.embedding for c in survivors])
            else:
                vectors = base.active_vectors[:0]
            if has_insertion and survivors:
                problem = RegressionProblem(concepts=vectors, target=base.input)
                weights = least_squares(problem)
            else:
                weights = ConceptWeights(
                    w=np.asarray([c.weight for c in survivors], dtype=np.float64),
                    solver=base.weights.solver, l1=base.weights.l1,
                    l2=base.weights.l2, s=base.weights.s,
                    iterations=base.weights.iterations,
                    converged=base.weights.converged,
                )
            session.current = _finish(base, concept_tuples, vectors, weights,
                                      self._classes)
            self._sync_rows(session)
            session.log("recompute", label_id=int(session.current.label_id))
        return session

    @staticmethod
    def _sync_rows(session: InterventionSession) -> None:
        """Mirror the recomputed prediction back onto the concept rows:
        weights refresh and surviving rows adopt the prediction's
        descending-|weight| order; deleted rows trail in stable order."""
        ranked = {
            text.casefold(): (pos, weight)
            for pos, (text, _, weight) in enumerate(session.current.concepts)
        }
        for concept in session.concepts:
            if concept.deleted:
                continue
            entry = ranked.get(concept.text.casefold())
            concept.weight = entry[1] if entry is not None else 0.0

        def key(concept: SessionConcept):
            if concept.deleted:
                return (2, 0)
            entry = ranked.get(concept.text.casefold())
            if entry is None:
                return (1, 0)
            return (0, entry[0])

        session.concepts.sort(key=key)
