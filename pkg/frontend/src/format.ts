/**
 * Presentation helpers. Negative-weight concepts are rendered with a NOT
 * prefix; numbers are displayed exactly as the server sent them.
 */
export function conceptLabel(text: string, weight: number): string {
  return weight < 0 ? `NOT ${text}` : text;
}

export function weightText(weight: number): string {
  return String(weight);
}

/** Direction marker for the post-recompute diff; no numeric arithmetic shown. */
export function changeMarker(before: number | undefined, after: number): string {
  if (before === undefined) return "new";
  if (after > before) return "↑";
  if (after < before) return "↓";
  return "·";
}

export function scoreBarWidths(scores: number[]): number[] {
  // geometry only: scale server scores into [0, 100] for bar widths
  if (scores.length === 0) return [];
  const max = Math.max(...scores.map((s) => Math.abs(s)), 1e-12);
  return scores.map((s) => Math.round((Math.abs(s) / max) * 100));
}
