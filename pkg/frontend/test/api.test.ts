import { describe, expect, inject, it } from "vitest";
import { ApiClient, ApiError } from "../src/api.js";

const baseUrl = () => inject("serviceUrl");
const embedding = () => inject("sampleEmbedding");
const sampleK = () => inject("sampleK");

describe("service contract", () => {
  it("reports health with bank shape", async () => {
    const api = new ApiClient(baseUrl());
    const health = await api.health();
    expect(health.status).toBe("ok");
    expect(health.bank_count).toBe(16);
    expect(health.dim).toBe(8);
  });

  it("infer returns concepts sorted by |weight| descending", async () => {
    const api = new ApiClient(baseUrl());
    const prediction = await api.infer(embedding(), sampleK());
    expect(prediction.concepts.length).toBeGreaterThan(0);
    const magnitudes = prediction.concepts.map((c) => Math.abs(c.weight));
    expect([...magnitudes].sort((a, b) => b - a)).toEqual(magnitudes);
    expect(prediction.fallback).toBe(false);
  });

  it("identical infer calls give identical payloads", async () => {
    const api = new ApiClient(baseUrl());
    const one = await api.infer(embedding(), sampleK());
    const two = await api.infer(embedding(), sampleK());
    expect(two).toEqual(one);
  });

  it("maps dimension errors to typed failures", async () => {
    const api = new ApiClient(baseUrl());
    await expect(api.infer([1, 2, 3])).rejects.toMatchObject({
      status: 400,
      code: "dimension_mismatch",
    });
    await expect(api.infer([1, 2, 3])).rejects.toBeInstanceOf(ApiError);
  });

  it("bank search returns scored vocabulary hits", async () => {
    const api = new ApiClient(baseUrl());
    const { results } = await api.searchBank("concept 3", 4);
    expect(results).toHaveLength(4);
    expect(results[0]?.text).toBe("concept 3");
    expect(results[0]?.score).toBeCloseTo(1.0, 4);
  });

  it("unknown sessions 404", async () => {
    const api = new ApiClient(baseUrl());
    await expect(api.getSession("missing")).rejects.toMatchObject({
      status: 404,
      code: "not_found",
    });
  });
});
