import type { SessionView } from "./controller.js";
import { changeMarker, conceptLabel, scoreBarWidths, weightText } from "./format.js";

/**
 * DOM rendering for the session view. Rows appear in server payload
 * order (descending |weight| after recompute); every number shown is a
 * server value.
 */
export function renderConceptTable(view: SessionView, onToggle: (index: number) => void): HTMLTableElement {
  const table = document.createElement("table");
  table.className = "concept-table";
  const head = table.createTHead().insertRow();
  for (const title of ["concept", "weight", "Δ", "source", ""]) {
    const th = document.createElement("th");
    th.textContent = title;
    head.appendChild(th);
  }
  const body = table.createTBody();
  view.rows.forEach((row, index) => {
    const tr = body.insertRow();
    tr.dataset.index = String(index);
    if (row.deleted) tr.classList.add("deleted");
    tr.insertCell().textContent = conceptLabel(row.text, row.weight);
    tr.insertCell().textContent = weightText(row.weight);
    tr.insertCell().textContent = view.previous
      ? changeMarker(view.previous.weights.get(row.text), row.weight)
      : "";
    tr.insertCell().textContent = row.source;
    const action = tr.insertCell();
    const button = document.createElement("button");
    button.textContent = row.deleted ? "restore" : "delete";
    button.addEventListener("click", () => onToggle(index));
    action.appendChild(button);
  });
  return table;
}

export function renderLabelPanel(view: SessionView, classNames?: string[]): HTMLElement {
  const panel = document.createElement("section");
  panel.className = "label-panel";
  const current = document.createElement("h2");
  const name = classNames?.[view.labelId] ?? `label ${view.labelId}`;
  current.textContent = name;
  current.dataset.labelId = String(view.labelId);
  panel.appendChild(current);
  if (view.previous && view.previous.labelId !== view.labelId) {
    const before = document.createElement("p");
    before.className = "label-before";
    const beforeName = classNames?.[view.previous.labelId] ?? `label ${view.previous.labelId}`;
    before.textContent = `was: ${beforeName}`;
    panel.appendChild(before);
  }
  const bars = document.createElement("div");
  bars.className = "score-bars";
  const widths = scoreBarWidths(view.classScores);
  view.classScores.forEach((score, i) => {
    const bar = document.createElement("div");
    bar.className = "score-bar";
    bar.style.width = `${widths[i] ?? 0}%`;
    bar.title = `${classNames?.[i] ?? i}: ${score}`;
    bar.dataset.score = String(score);
    bars.appendChild(bar);
  });
  panel.appendChild(bars);
  return panel;
}

export function renderFallbackBanner(view: SessionView): HTMLElement | null {
  if (!view.fallback) return null;
  const banner = document.createElement("div");
  banner.className = "fallback-banner";
  banner.textContent =
    "All concept weights are zero; the label falls back to the raw input embedding.";
  return banner;
}

export function renderHistory(view: SessionView): HTMLOListElement {
  const list = document.createElement("ol");
  list.className = "history";
  for (const entry of view.history) {
    const item = document.createElement("li");
    const extras = Object.entries(entry)
      .filter(([key]) => key !== "op" && key !== "ts")
      .map(([key, value]) => `${key}=${String(value)}`)
      .join(" ");
    item.textContent = extras ? `${entry.op} ${extras}` : entry.op;
    list.appendChild(item);
  }
  return list;
}

export function renderSession(
  root: HTMLElement,
  view: SessionView,
  handlers: { onToggle: (index: number) => void },
  classNames?: string[],
): void {
  root.replaceChildren();
  const banner = renderFallbackBanner(view);
  if (banner) root.appendChild(banner);
  root.appendChild(renderLabelPanel(view, classNames));
  root.appendChild(renderConceptTable(view, handlers.onToggle));
  root.appendChild(renderHistory(view));
}
