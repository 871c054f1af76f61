import { describe, expect, inject, it } from "vitest";
import { ApiClient } from "../src/api.js";
import { SessionController } from "../src/controller.js";
import { renderConceptTable, renderFallbackBanner, renderSession } from "../src/dom.js";
import { conceptLabel, changeMarker, scoreBarWidths } from "../src/format.js";

const baseUrl = () => inject("serviceUrl");
const embedding = () => inject("sampleEmbedding");
const sampleK = () => inject("sampleK");

describe("dom rendering", () => {
  it("orders table rows exactly as the server payload", async () => {
    const controller = new SessionController(new ApiClient(baseUrl()));
    const view = await controller.load(embedding(), sampleK());
    const table = renderConceptTable(view, () => {});
    const rendered = [...table.querySelectorAll("tbody tr")].map(
      (row) => row.querySelectorAll("td")[1]!.textContent,
    );
    expect(rendered).toEqual(view.rows.map((r) => String(r.weight)));
  });

  it("prefixes negative-weight concepts with NOT", () => {
    expect(conceptLabel("stripes", -0.25)).toBe("NOT stripes");
    expect(conceptLabel("stripes", 0.25)).toBe("stripes");
  });

  it("diff markers compare without displaying arithmetic", () => {
    expect(changeMarker(undefined, 0.5)).toBe("new");
    expect(changeMarker(0.5, 0.7)).toBe("↑");
    expect(changeMarker(0.7, 0.5)).toBe("↓");
    expect(changeMarker(0.5, 0.5)).toBe("·");
  });

  it("score bars scale geometrically", () => {
    expect(scoreBarWidths([0.5, 1.0, 0.25])).toEqual([50, 100, 25]);
    expect(scoreBarWidths([])).toEqual([]);
  });

  it("shows the fallback banner only after all weights vanish", async () => {
    const controller = new SessionController(new ApiClient(baseUrl()));
    await controller.load(embedding(), sampleK());
    expect(renderFallbackBanner(controller.view)).toBeNull();
    for (let i = 0; i < controller.view.rows.length; i += 1) {
      await controller.toggleDelete(i);
    }
    const view = await controller.recompute();
    const banner = renderFallbackBanner(view);
    expect(banner).not.toBeNull();
    expect(banner!.className).toBe("fallback-banner");
  });

  it("renders a full session into a root element", async () => {
    const controller = new SessionController(new ApiClient(baseUrl()));
    const view = await controller.load(embedding(), sampleK());
    const root = document.createElement("div");
    renderSession(root, view, { onToggle: () => {} });
    expect(root.querySelector(".concept-table")).not.toBeNull();
    expect(root.querySelector(".label-panel h2")!.getAttribute("data-label-id"))
      .toBe(String(view.labelId));
    expect(root.querySelectorAll(".history li").length).toBe(view.history.length);
  });

  it("marks deleted rows for strikethrough styling", async () => {
    const controller = new SessionController(new ApiClient(baseUrl()));
    await controller.load(embedding(), sampleK());
    await controller.toggleDelete(0);
    const table = renderConceptTable(controller.view, () => {});
    const firstRow = table.querySelector("tbody tr")!;
    expect(firstRow.classList.contains("deleted")).toBe(true);
  });
});
