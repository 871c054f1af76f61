import type {
  ApiErrorPayload,
  EditOp,
  PredictionPayload,
  SearchHit,
  SessionPayload,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function parseJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let code = "unknown";
    let message = `HTTP ${response.status}`;
    try {
      const body = (await response.json()) as ApiErrorPayload;
      code = body.code ?? code;
      message = body.message ?? message;
    } catch {
      // non-JSON error body: keep defaults
    }
    throw new ApiError(response.status, code, message);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private post<T>(path: string, body?: unknown): Promise<T> {
    return this.fetchFn(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    }).then((r) => parseJson<T>(r));
  }

  private get<T>(path: string): Promise<T> {
    return this.fetchFn(`${this.baseUrl}${path}`).then((r) => parseJson<T>(r));
  }

  health(): Promise<{ status: string; bank_count: number; dim: number }> {
    return this.get("/v1/healthz");
  }

  infer(embedding: number[], k?: number, solver?: string): Promise<PredictionPayload> {
    return this.post("/v1/infer", { embedding, k, solver });
  }

  createSession(embedding: number[], k?: number, solver?: string): Promise<SessionPayload> {
    return this.post("/v1/sessions", { embedding, k, solver });
  }

  getSession(sessionId: string): Promise<SessionPayload> {
    return this.get(`/v1/sessions/${sessionId}`);
  }

  postEdit(sessionId: string, edit: EditOp): Promise<SessionPayload> {
    return this.post(`/v1/sessions/${sessionId}/edits`, edit);
  }

  recompute(sessionId: string): Promise<SessionPayload> {
    return this.post(`/v1/sessions/${sessionId}/recompute`);
  }

  searchBank(query: string, n = 8): Promise<{ results: SearchHit[] }> {
    const params = new URLSearchParams({ q: query, n: String(n) });
    return this.get(`/v1/bank/search?${params}`);
  }
}
