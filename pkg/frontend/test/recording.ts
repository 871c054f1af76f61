import type { FetchLike } from "../src/api.js";

export type Exchange = {
  url: string;
  method: string;
  requestBody: unknown;
  responseBody: unknown;
};

/**
 * Network interception: wraps fetch, recording every request and parsed
 * response so tests can prove that displayed numbers all originate from
 * server payloads.
 */
export function recordingFetch(): { fetchFn: FetchLike; exchanges: Exchange[] } {
  const exchanges: Exchange[] = [];
  const fetchFn: FetchLike = async (input, init) => {
    const response = await fetch(input, init);
    // read once and rebuild: happy-dom's clone() shares the body stream
    const text = await response.text();
    let responseBody: unknown = null;
    try {
      responseBody = JSON.parse(text);
    } catch {
      responseBody = null;
    }
    exchanges.push({
      url: input,
      method: init?.method ?? "GET",
      requestBody: init?.body ? JSON.parse(init.body as string) : null,
      responseBody,
    });
    return new Response(text, {
      status: response.status,
      statusText: response.statusText,
      headers: response.headers,
    });
  };
  return { fetchFn, exchanges };
}

/** Collect every finite number reachable in a JSON payload. */
export function collectNumbers(value: unknown, out = new Set<number>()): Set<number> {
  if (typeof value === "number" && Number.isFinite(value)) {
    out.add(value);
  } else if (Array.isArray(value)) {
    for (const entry of value) collectNumbers(entry, out);
  } else if (value && typeof value === "object") {
    for (const entry of Object.values(value)) collectNumbers(entry, out);
  }
  return out;
}
