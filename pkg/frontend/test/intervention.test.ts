import { describe, expect, inject, it } from "vitest";
import { ApiClient } from "../src/api.js";
import { SessionController } from "../src/controller.js";
import { collectNumbers, recordingFetch } from "./recording.js";

const baseUrl = () => inject("serviceUrl");
const embedding = () => inject("sampleEmbedding");
const sampleK = () => inject("sampleK");

describe("scripted intervention flow", () => {
  it("delete top concept + recompute matches a direct API call exactly", async () => {
    // scripted UI path with intercepted network traffic
    const { fetchFn, exchanges } = recordingFetch();
    const controller = new SessionController(new ApiClient(baseUrl(), fetchFn));
    await controller.load(embedding(), sampleK());
    const before = controller.view;
    expect(before.rows.length).toBeGreaterThan(1);

    await controller.toggleDelete(0); // top concept: payload order is |w| desc
    const view = await controller.recompute();

    // direct API reference: same session inputs, same edit, no UI involved
    const direct = new ApiClient(baseUrl());
    const session = await direct.createSession(embedding(), sampleK());
    await direct.postEdit(session.session_id, { op: "delete", index: 0 });
    const reference = await direct.recompute(session.session_id);

    expect(view.labelId).toBe(reference.prediction.label_id);
    expect(view.classScores).toEqual(reference.prediction.class_scores);
    expect(view.rows.map((r) => [r.text, r.weight, r.deleted])).toEqual(
      reference.concepts.map((r) => [r.text, r.weight, r.deleted]),
    );
    expect(view.fallback).toBe(reference.prediction.fallback);

    // the deleted top concept no longer contributes a nonzero weight
    const deletedText = before.rows[0]!.text;
    const stillActive = reference.prediction.concepts.map((c) => c.text);
    expect(stillActive).not.toContain(deletedText);

    // network interception: every number the UI holds came from a response
    const serverNumbers = collectNumbers(exchanges.map((e) => e.responseBody));
    for (const row of view.rows) {
      expect(serverNumbers.has(row.weight)).toBe(true);
    }
    for (const score of view.classScores) {
      expect(serverNumbers.has(score)).toBe(true);
    }
    expect(serverNumbers.has(view.labelId)).toBe(true);

    // and no request ever shipped a weight to the server: edits carry
    // only the operation and an index
    const editBodies = exchanges
      .filter((e) => e.url.includes("/edits"))
      .map((e) => e.requestBody as Record<string, unknown>);
    expect(editBodies.length).toBeGreaterThan(0);
    for (const body of editBodies) {
      expect(Object.keys(body).sort()).toEqual(["index", "op"]);
    }
  });

  it("optimistic delete rolls back when the server rejects", async () => {
    const controller = new SessionController(new ApiClient(baseUrl()));
    await controller.load(embedding(), sampleK());
    const rows = controller.view.rows.length;
    // bypass the UI bounds check to hit the server-side validation
    const raw = controller as unknown as {
      api: ApiClient;
      view: { sessionId: string };
    };
    await expect(
      new ApiClient(baseUrl()).postEdit(controller.view.sessionId, {
        op: "delete",
        index: rows + 50,
      }),
    ).rejects.toMatchObject({ status: 400 });
    expect(raw.view.sessionId).toBe(controller.view.sessionId);
  });

  it("delete-all recompute flags the fallback", async () => {
    const controller = new SessionController(new ApiClient(baseUrl()));
    await controller.load(embedding(), sampleK());
    for (let i = 0; i < controller.view.rows.length; i += 1) {
      await controller.toggleDelete(i);
    }
    const view = await controller.recompute();
    expect(view.fallback).toBe(true);
  });

  it("insert from bank search then recompute updates weights from the server", async () => {
    const { fetchFn, exchanges } = recordingFetch();
    const api = new ApiClient(baseUrl(), fetchFn);
    const controller = new SessionController(api);
    // k=1 retrieves one component; the other arrives via insertion
    await controller.load(embedding(), 1);
    const { results } = await api.searchBank("concept 0", 1);
    expect(results[0]?.text).toBe("concept 0");
    await controller.insertConcept(results[0]!.text);
    const view = await controller.recompute();
    const weights = new Map(view.rows.map((r) => [r.text, r.weight]));
    expect(weights.has("concept 0")).toBe(true);
    // least-squares re-fit on the server recovers both true components
    expect(Math.abs(weights.get("concept 0")! - 0.6)).toBeLessThan(1e-5);
    expect(Math.abs(weights.get("concept 1")! - 0.8)).toBeLessThan(1e-5);
    // rows mirror the recomputed prediction's descending-|weight| order
    const magnitudes = view.rows
      .filter((r) => !r.deleted)
      .map((r) => Math.abs(r.weight));
    expect([...magnitudes].sort((a, b) => b - a)).toEqual(magnitudes);
    const serverNumbers = collectNumbers(exchanges.map((e) => e.responseBody));
    for (const row of view.rows) {
      expect(serverNumbers.has(row.weight)).toBe(true);
    }
  });

  it("history grows by one entry per accepted edit", async () => {
    const controller = new SessionController(new ApiClient(baseUrl()));
    await controller.load(embedding(), sampleK());
    await controller.toggleDelete(0);
    await controller.toggleDelete(0); // restore
    const view = await controller.recompute();
    const ops = view.history.map((h) => h.op);
    expect(ops).toEqual(["create", "delete", "restore", "recompute"]);
  });

  it("recompute records the previous label for the diff view", async () => {
    const controller = new SessionController(new ApiClient(baseUrl()));
    await controller.load(embedding(), sampleK());
    const labelBefore = controller.view.labelId;
    await controller.toggleDelete(0);
    const view = await controller.recompute();
    expect(view.previous?.labelId).toBe(labelBefore);
    expect(view.previous?.weights.size).toBeGreaterThan(0);
  });
});
