import { ApiClient } from "./api.js";
import { renderDeletionCurve, renderPcaScatter } from "./charts.js";
import { SessionController } from "./controller.js";
import { renderSession } from "./dom.js";

const api = new ApiClient("");
const controller = new SessionController(api);

function statusLine(text: string): void {
  const el = document.getElementById("status");
  if (el) el.textContent = text;
}

function redraw(): void {
  const root = document.getElementById("session-root");
  if (!root || !controller.hasSession) return;
  renderSession(root as HTMLElement, controller.view, {
    onToggle: (index) => {
      controller
        .toggleDelete(index)
        .then(() => redraw())
        .catch((err) => {
          statusLine(`edit failed: ${err}`);
          redraw();
        });
    },
  });
}

async function loadFromTextarea(): Promise<void> {
  const input = document.getElementById("embedding-input") as HTMLTextAreaElement | null;
  const kInput = document.getElementById("k-input") as HTMLInputElement | null;
  if (!input) return;
  let embedding: number[];
  try {
    embedding = JSON.parse(input.value) as number[];
  } catch {
    statusLine("embedding must be a JSON array of numbers");
    return;
  }
  const k = kInput && kInput.value ? Number(kInput.value) : undefined;
  statusLine("creating session…");
  try {
    await controller.load(embedding, k);
    statusLine(`session ${controller.view.sessionId}`);
    redraw();
  } catch (err) {
    statusLine(`session failed: ${err}`);
  }
}

async function recompute(): Promise<void> {
  statusLine("recomputing…");
  try {
    await controller.recompute();
    statusLine("recomputed");
    redraw();
  } catch (err) {
    statusLine(`recompute failed: ${err}`);
  }
}

async function searchAndFill(): Promise<void> {
  const box = document.getElementById("concept-search") as HTMLInputElement | null;
  const list = document.getElementById("search-results");
  if (!box || !list || box.value.length < 1) return;
  try {
    const { results } = await api.searchBank(box.value, 8);
    list.replaceChildren();
    for (const hit of results) {
      const item = document.createElement("li");
      const button = document.createElement("button");
      button.textContent = `${hit.text} (${hit.score})`;
      button.addEventListener("click", () => {
        controller
          .insertConcept(hit.text)
          .then(() => redraw())
          .catch((err) => statusLine(`insert failed: ${err}`));
      });
      item.appendChild(button);
      list.appendChild(item);
    }
  } catch (err) {
    statusLine(`search failed: ${err}`);
  }
}

async function loadChart(
  inputId: string,
  slotId: string,
  render: (csv: string) => SVGSVGElement,
): Promise<void> {
  const input = document.getElementById(inputId) as HTMLInputElement | null;
  const slot = document.getElementById(slotId);
  const file = input?.files?.[0];
  if (!file || !slot) return;
  const text = await file.text();
  slot.replaceChildren(render(text));
}

function wire(): void {
  document.getElementById("load-session")?.addEventListener("click", () => {
    void loadFromTextarea();
  });
  document.getElementById("recompute")?.addEventListener("click", () => {
    void recompute();
  });
  document.getElementById("concept-search")?.addEventListener("input", () => {
    void searchAndFill();
  });
  document.getElementById("deletion-csv")?.addEventListener("change", () => {
    void loadChart("deletion-csv", "deletion-chart", renderDeletionCurve);
  });
  document.getElementById("pca-csv")?.addEventListener("change", () => {
    void loadChart("pca-csv", "pca-chart", renderPcaScatter);
  });
}

wire();
export { api, controller };
