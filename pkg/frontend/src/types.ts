export type ConceptEntry = {
  text: string;
  bank_index: number;
  weight: number;
};

export type PredictionPayload = {
  label_id: number;
  class_scores: number[];
  concepts: ConceptEntry[];
  fallback: boolean;
};

export type SessionConceptRow = {
  text: string;
  bank_index: number;
  weight: number;
  source: "retrieved" | "inserted";
  deleted: boolean;
};

export type HistoryEntry = {
  ts: number;
  op: string;
  [key: string]: unknown;
};

export type SessionPayload = {
  session_id: string;
  prediction: PredictionPayload;
  concepts: SessionConceptRow[];
  history: HistoryEntry[];
};

export type SearchHit = {
  text: string;
  bank_index: number;
  score: number;
};

export type EditOp =
  | { op: "delete"; index: number }
  | { op: "restore"; index: number }
  | { op: "insert"; concept: string };

export type ApiErrorPayload = {
  code: string;
  message: string;
};
