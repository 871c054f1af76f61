import type { ApiClient } from "./api.js";
import type { SessionConceptRow, SessionPayload } from "./types.js";

/**
 * Client-side session state. All weights, scores, and labels are copied
 * verbatim from server payloads; the controller never derives numbers of
 * its own. Edits are optimistic (toggle locally, roll back on failure)
 * and queued FIFO so concurrent clicks serialize.
 */
export type SessionView = {
  sessionId: string;
  rows: SessionConceptRow[];
  labelId: number;
  classScores: number[];
  fallback: boolean;
  history: SessionPayload["history"];
  previous: { labelId: number; weights: Map<string, number> } | null;
  pendingEdits: number;
};

export class SessionController {
  private view_: SessionView | null = null;
  private queue: Promise<unknown> = Promise.resolve();

  constructor(private readonly api: ApiClient) {}

  get view(): SessionView {
    if (!this.view_) throw new Error("no active session");
    return this.view_;
  }

  get hasSession(): boolean {
    return this.view_ !== null;
  }

  private applyPayload(payload: SessionPayload, previous: SessionView["previous"]): void {
    this.view_ = {
      sessionId: payload.session_id,
      rows: payload.concepts.map((row) => ({ ...row })),
      labelId: payload.prediction.label_id,
      classScores: [...payload.prediction.class_scores],
      fallback: payload.prediction.fallback,
      history: payload.history,
      previous,
      pendingEdits: this.view_?.pendingEdits ?? 0,
    };
  }

  private enqueue<T>(task: () => Promise<T>): Promise<T> {
    const next = this.queue.then(task);
    this.queue = next.catch(() => undefined);
    return next;
  }

  async load(embedding: number[], k?: number, solver?: string): Promise<SessionView> {
    const payload = await this.api.createSession(embedding, k, solver);
    this.applyPayload(payload, null);
    return this.view;
  }

  /** Optimistically flip a row's deleted flag; roll back if the server rejects. */
  toggleDelete(index: number): Promise<SessionView> {
    const view = this.view;
    const row = view.rows[index];
    if (!row) return Promise.reject(new Error(`no concept row ${index}`));
    const op = row.deleted ? "restore" : "delete";
    row.deleted = !row.deleted;
    view.pendingEdits += 1;
    return this.enqueue(async () => {
      try {
        const payload = await this.api.postEdit(view.sessionId, { op, index });
        this.applyPayload(payload, view.previous);
      } catch (err) {
        row.deleted = !row.deleted; // roll the optimistic flip back
        throw err;
      } finally {
        this.view.pendingEdits = Math.max(0, this.view.pendingEdits - 1);
      }
      return this.view;
    });
  }

  insertConcept(text: string): Promise<SessionView> {
    const view = this.view;
    view.pendingEdits += 1;
    return this.enqueue(async () => {
      try {
        const payload = await this.api.postEdit(view.sessionId, {
          op: "insert",
          concept: text,
        });
        this.applyPayload(payload, view.previous);
      } finally {
        this.view.pendingEdits = Math.max(0, this.view.pendingEdits - 1);
      }
      return this.view;
    });
  }

  /** Recompute on the server, remembering the prior label and weights for the diff. */
  recompute(): Promise<SessionView> {
    const view = this.view;
    const before = {
      labelId: view.labelId,
      weights: new Map(view.rows.map((row) => [row.text, row.weight])),
    };
    return this.enqueue(async () => {
      const payload = await this.api.recompute(view.sessionId);
      this.applyPayload(payload, before);
      return this.view;
    });
  }

  async refresh(): Promise<SessionView> {
    const payload = await this.api.getSession(this.view.sessionId);
    this.applyPayload(payload, this.view.previous);
    return this.view;
  }
}
