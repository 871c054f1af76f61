import { describe, expect, it } from "vitest";
import { renderDeletionCurve, renderPcaScatter } from "../src/charts.js";
import { column, parseCsv } from "../src/csv.js";

const DELETION_CSV = [
  "order,ratio,accuracy",
  "ascending,0.0,1.0",
  "ascending,0.5,0.8",
  "ascending,1.0,0.2",
  "descending,0.0,1.0",
  "descending,0.5,0.4",
  "descending,1.0,0.2",
].join("\n");

const PCA_CSV = [
  "group,x,y",
  "images,0.1,0.2",
  "images,-0.3,0.4",
  "concepts,0.5,-0.1",
  "labels,0.0,0.0",
].join("\n");

describe("csv parsing", () => {
  it("splits header and rows", () => {
    const table = parseCsv(DELETION_CSV);
    expect(table.header).toEqual(["order", "ratio", "accuracy"]);
    expect(table.rows).toHaveLength(6);
  });

  it("extracts columns by name", () => {
    const table = parseCsv(PCA_CSV);
    expect(column(table, "group")).toEqual(["images", "images", "concepts", "labels"]);
    expect(() => column(table, "missing")).toThrow(/missing CSV column/);
  });
});

describe("charts", () => {
  it("draws one polyline per deletion order", () => {
    const svg = renderDeletionCurve(DELETION_CSV);
    const paths = [...svg.querySelectorAll("path")];
    expect(paths.map((p) => p.getAttribute("data-series")).sort()).toEqual([
      "ascending",
      "descending",
    ]);
    for (const path of paths) {
      expect(path.getAttribute("d")).toMatch(/^M/);
    }
  });

  it("draws one dot per PCA point, grouped by color", () => {
    const svg = renderPcaScatter(PCA_CSV);
    const dots = [...svg.querySelectorAll("circle")];
    expect(dots).toHaveLength(4);
    const byGroup = new Map<string, string>();
    for (const dot of dots) {
      const group = dot.getAttribute("data-group")!;
      const fill = dot.getAttribute("fill")!;
      if (byGroup.has(group)) {
        expect(byGroup.get(group)).toBe(fill);
      } else {
        byGroup.set(group, fill);
      }
    }
    expect(byGroup.size).toBe(3);
  });
});
