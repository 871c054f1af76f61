import { column, parseCsv } from "./csv.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 480;
const HEIGHT = 280;
const PAD = 36;
const SERIES_COLORS = ["#2563eb", "#dc2626", "#059669", "#d97706", "#7c3aed"];

function svgElement(width = WIDTH, height = HEIGHT): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("width", String(width));
  svg.setAttribute("height", String(height));
  return svg;
}

function scale(value: number, lo: number, hi: number, a: number, b: number): number {
  if (hi <= lo) return (a + b) / 2;
  return a + ((value - lo) / (hi - lo)) * (b - a);
}

/** Deletion-curve chart from the evaluation CSV (order,ratio,accuracy). */
export function renderDeletionCurve(csvText: string): SVGSVGElement {
  const table = parseCsv(csvText);
  const orders = column(table, "order");
  const xs = column(table, table.header.includes("ratio") ? "ratio" : "count")
    .map(Number);
  const ys = column(table, "accuracy").map(Number);

  const svg = svgElement();
  const series = new Map<string, { x: number; y: number }[]>();
  orders.forEach((order, i) => {
    const x = xs[i];
    const y = ys[i];
    if (x === undefined || y === undefined) return;
    if (!series.has(order)) series.set(order, []);
    series.get(order)!.push({ x, y });
  });
  const xLo = Math.min(...xs, 0);
  const xHi = Math.max(...xs, 1);

  let colorAt = 0;
  for (const [order, points] of series) {
    points.sort((p, q) => p.x - q.x);
    const path = points
      .map((p, i) => {
        const px = scale(p.x, xLo, xHi, PAD, WIDTH - PAD);
        const py = scale(p.y, 0, 1, HEIGHT - PAD, PAD);
        return `${i === 0 ? "M" : "L"}${px.toFixed(1)},${py.toFixed(1)}`;
      })
      .join(" ");
    const line = document.createElementNS(SVG_NS, "path");
    line.setAttribute("d", path);
    line.setAttribute("fill", "none");
    line.setAttribute("stroke", SERIES_COLORS[colorAt % SERIES_COLORS.length]!);
    line.setAttribute("stroke-width", "2");
    line.setAttribute("data-series", order);
    svg.appendChild(line);
    colorAt += 1;
  }
  return svg;
}

/** PCA scatter from the export CSV (group,x,y), one color per group. */
export function renderPcaScatter(csvText: string): SVGSVGElement {
  const table = parseCsv(csvText);
  const groups = column(table, "group");
  const xs = column(table, "x").map(Number);
  const ys = column(table, "y").map(Number);

  const svg = svgElement();
  const xLo = Math.min(...xs);
  const xHi = Math.max(...xs);
  const yLo = Math.min(...ys);
  const yHi = Math.max(...ys);
  const palette = new Map<string, string>();
  groups.forEach((group, i) => {
    if (!palette.has(group)) {
      palette.set(group, SERIES_COLORS[palette.size % SERIES_COLORS.length]!);
    }
    const x = xs[i];
    const y = ys[i];
    if (x === undefined || y === undefined) return;
    const dot = document.createElementNS(SVG_NS, "circle");
    dot.setAttribute("cx", scale(x, xLo, xHi, PAD, WIDTH - PAD).toFixed(1));
    dot.setAttribute("cy", scale(y, yLo, yHi, HEIGHT - PAD, PAD).toFixed(1));
    dot.setAttribute("r", "3");
    dot.setAttribute("fill", palette.get(group)!);
    dot.setAttribute("data-group", group);
    svg.appendChild(dot);
  });
  return svg;
}
