/** The four figure kinds rendered from trotterlab CSV outputs. */

import { readFileSync, readdirSync } from "fs";
import { join } from "path";

import { Table, parseCsv, requireColumns, SchemaError } from "./csv.js";
import { Scale, linearScale, logScale, positiveExtent, extent, tickLabel } from "./scale.js";
import { PALETTE, Svg, shade, fmt } from "./svg.js";

export type PlotKind = "dt_scaling" | "T_scaling" | "population" | "qaoa_panels";

export interface GuideLine {
  exponent: number;
  anchorX: number;
  anchorY: number;
}

export interface PlotSpec {
  kind: PlotKind;
  /** CSV file for the single-panel kinds; pipeline output directory for qaoa_panels */
  input: string;
  output: string;
  title?: string;
  guides?: GuideLine[];
}

interface Frame {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

function drawAxes(svg: Svg, frame: Frame, xs: Scale, ys: Scale,
                  xlabel: string, ylabel: string) {
  svg.line(frame.x0, frame.y1, frame.x1, frame.y1);
  svg.line(frame.x0, frame.y0, frame.x0, frame.y1);
  for (const t of xs.ticks()) {
    const px = xs.map(t);
    if (px < frame.x0 - 0.5 || px > frame.x1 + 0.5) continue;
    svg.line(px, frame.y1, px, frame.y1 + 4);
    svg.text(px, frame.y1 + 16, tickLabel(t), 10, "middle");
  }
  for (const t of ys.ticks()) {
    const py = ys.map(t);
    if (py < frame.y0 - 0.5 || py > frame.y1 + 0.5) continue;
    svg.line(frame.x0 - 4, py, frame.x0, py);
    svg.text(frame.x0 - 6, py + 3, tickLabel(t), 10, "end");
  }
  svg.text((frame.x0 + frame.x1) / 2, frame.y1 + 32, xlabel, 12, "middle");
  svg.text(frame.x0 - 44, frame.y0 - 8, ylabel, 12, "start");
}

function warnEmpty(svg: Svg, frame: Frame, message: string) {
  svg.rect(frame.x0, (frame.y0 + frame.y1) / 2 - 16, frame.x1 - frame.x0, 32,
           "#fff3cd");
  svg.text((frame.x0 + frame.x1) / 2, (frame.y0 + frame.y1) / 2 + 4,
           message, 12, "middle", "#856404");
}

function drawGuides(svg: Svg, frame: Frame, xs: Scale, ys: Scale,
                    guides: GuideLine[]) {
  for (const g of guides) {
    const [lo, hi] = xs.domain;
    const pts: Array<[number, number]> = [];
    for (let i = 0; i <= 40; i += 1) {
      const x = lo * Math.pow(hi / lo, i / 40);
      const y = g.anchorY * Math.pow(x / g.anchorX, g.exponent);
      const py = ys.map(y);
      if (py >= frame.y0 && py <= frame.y1) pts.push([xs.map(x), py]);
    }
    svg.polyline(pts, "#555", 1, "5,4");
    if (pts.length > 0) {
      const [lx, ly] = pts[pts.length - 1];
      svg.text(lx - 4, ly - 4, `slope ${fmt(g.exponent)}`, 10, "end", "#555");
    }
  }
}

const SWEEP_COLUMNS = ["dt", "T", "fraction", "ordering", "infidelity"];

function sweepSeries(table: Table, xName: "dt" | "T") {
  const [dtI, tI, fracI, ordI, infI] = requireColumns(table, SWEEP_COLUMNS);
  const groups = new Map<string, Array<[number, number]>>();
  for (const row of table.rows) {
    const raw = table.raw[table.rows.indexOf(row)];
    const key =
      xName === "dt"
        ? `T=${raw[tI]}, f=${raw[fracI]}, ${raw[ordI]}`
        : `dt=${raw[dtI]}, f=${raw[fracI]}, ${raw[ordI]}`;
    const x = xName === "dt" ? row[dtI] : row[tI];
    const y = row[infI];
    if (!Number.isFinite(x) || !Number.isFinite(y) || y <= 0) continue;
    if (!groups.has(key)) groups.set(key, []);
    groups.get(key)!.push([x, y]);
  }
  for (const pts of groups.values()) pts.sort((a, b) => a[0] - b[0]);
  return groups;
}

function renderScaling(spec: PlotSpec, xName: "dt" | "T"): string {
  const table = parseCsv(readFileSync(spec.input, "utf-8"));
  const svg = new Svg(720, 480);
  const frame: Frame = { x0: 70, y0: 30, x1: 690, y1: 420 };
  svg.text(frame.x0, 18, spec.title ?? `infidelity vs ${xName}`, 13);
  if (table.rows.length === 0) {
    const xs = logScale(1e-3, 1, frame.x0, frame.x1);
    const ys = logScale(1e-8, 1, frame.y1, frame.y0);
    drawAxes(svg, frame, xs, ys, xName, "infidelity");
    warnEmpty(svg, frame, "no data rows in input CSV");
    return svg.render();
  }
  const groups = sweepSeries(table, xName);
  const allX: number[] = [];
  const allY: number[] = [];
  for (const pts of groups.values()) {
    for (const [x, y] of pts) {
      allX.push(x);
      allY.push(y);
    }
  }
  const [xlo, xhi] = positiveExtent(allX);
  const [ylo, yhi] = positiveExtent(allY);
  const xs = logScale(xlo / 1.2, xhi * 1.2, frame.x0, frame.x1);
  const ys = logScale(ylo / 2, yhi * 2, frame.y1, frame.y0);
  drawAxes(svg, frame, xs, ys, xName, "infidelity");
  let i = 0;
  for (const [label, pts] of groups) {
    const color = PALETTE[i % PALETTE.length];
    svg.polyline(pts.map(([x, y]) => [xs.map(x), ys.map(y)]), color);
    for (const [x, y] of pts) svg.circle(xs.map(x), ys.map(y), 2.4, color);
    svg.text(frame.x1 - 8, frame.y0 + 14 + 14 * i, label, 10, "end", color);
    i += 1;
  }
  drawGuides(svg, frame, xs, ys, spec.guides ?? []);
  return svg.render();
}

function renderPopulation(spec: PlotSpec): string {
  const table = parseCsv(readFileSync(spec.input, "utf-8"));
  const svg = new Svg(720, 480);
  const frame: Frame = { x0: 70, y0: 30, x1: 690, y1: 420 };
  svg.text(frame.x0, 18, spec.title ?? "adiabatic-basis populations", 13);
  if (table.rows.length === 0) {
    const xs = linearScale(0, 1, frame.x0, frame.x1);
    const ys = linearScale(0, 1, frame.y1, frame.y0);
    drawAxes(svg, frame, xs, ys, "u", "population");
    warnEmpty(svg, frame, "no data rows in input CSV");
    return svg.render();
  }
  requireColumns(table, ["t", "u", "pop_0"]);
  const uIdx = table.columns.indexOf("u");
  const popIdx = table.columns
    .map((c, idx) => ({ c, idx }))
    .filter(({ c }) => c.startsWith("pop_"))
    .map(({ idx }) => idx);
  const xs = linearScale(0, 1, frame.x0, frame.x1);
  const ys = linearScale(0, 1.02, frame.y1, frame.y0);
  drawAxes(svg, frame, xs, ys, "u", "population");
  popIdx.slice(0, 10).forEach((pi, k) => {
    const pts: Array<[number, number]> = table.rows.map((row) => [
      xs.map(row[uIdx]),
      ys.map(row[pi]),
    ]);
    const color = PALETTE[k % PALETTE.length];
    svg.polyline(pts, color, k === 0 ? 2.2 : 1.2);
    svg.text(frame.x1 - 8, frame.y0 + 14 + 14 * k, table.columns[pi], 10, "end", color);
  });
  return svg.render();
}

interface PipelineFiles {
  summary: Table;
  angles: Array<{ p: number; table: Table }>;
  curves: Array<{ p: number; table: Table }>;
  trotterized: Array<{ p: number; table: Table }>;
}

function loadPipeline(dir: string): PipelineFiles {
  const read = (name: string) => parseCsv(readFileSync(join(dir, name), "utf-8"));
  const entries = readdirSync(dir).sort();
  const grab = (prefix: string) =>
    entries
      .filter((f) => f.startsWith(prefix) && f.endsWith(".csv"))
      .map((f) => ({ p: Number(f.slice(prefix.length, -4)), table: read(f) }))
      .sort((a, b) => a.p - b.p);
  return {
    summary: read("summary.csv"),
    angles: grab("angles_p"),
    curves: grab("curve_p"),
    trotterized: grab("trotterized_p"),
  };
}

function sCurvePoints(table: Table): Array<[number, number]> {
  const [mI, gI, bI] = requireColumns(table, ["m", "gamma", "beta"]);
  const n = table.rows.length;
  return table.rows.map((row) => [
    row[mI] / (n + 1),
    row[gI] / (row[gI] + row[bI]),
  ]);
}

function renderQaoaPanels(spec: PlotSpec): string {
  const files = loadPipeline(spec.input);
  const svg = new Svg(960, 720);
  svg.text(20, 18, spec.title ?? "QAOA / digitized annealing correspondence", 13);

  const frames: Frame[] = [
    { x0: 70, y0: 40, x1: 450, y1: 330 },
    { x0: 560, y0: 40, x1: 940, y1: 330 },
    { x0: 70, y0: 400, x1: 450, y1: 690 },
    { x0: 560, y0: 400, x1: 940, y1: 690 },
  ];
  const labels = ["(a) QAOA angles", "(b) anneal curves", "(c) Trotterized curves",
                  "(d) infidelity vs P"];
  frames.forEach((f, i) => svg.text(f.x0, f.y0 - 8, labels[i], 12));

  // (a) s_m ladders
  {
    const f = frames[0];
    const xs = linearScale(0, 1, f.x0, f.x1);
    const ys = linearScale(0, 1, f.y1, f.y0);
    drawAxes(svg, f, xs, ys, "m/(P+1)", "s_m");
    if (files.angles.length === 0) warnEmpty(svg, f, "no angle files");
    files.angles.forEach(({ table }, i) => {
      const pts = sCurvePoints(table).map(([x, y]): [number, number] =>
        [xs.map(x), ys.map(y)]);
      svg.polyline(pts, shade(i, files.angles.length));
    });
  }
  // (b) anneal curves
  {
    const f = frames[1];
    const xs = linearScale(0, 1, f.x0, f.x1);
    const ys = linearScale(0, 1, f.y1, f.y0);
    drawAxes(svg, f, xs, ys, "t/T", "u");
    if (files.curves.length === 0) warnEmpty(svg, f, "no curve files");
    files.curves.forEach(({ table }, i) => {
      const [tI, uI] = requireColumns(table, ["t_norm", "u"]);
      const pts: Array<[number, number]> = table.rows.map((row) => [
        xs.map(row[tI]),
        ys.map(row[uI]),
      ]);
      svg.polyline(pts, shade(i, files.curves.length));
    });
  }
  // (c) Trotterized step curves
  {
    const f = frames[2];
    const xs = linearScale(0, 1, f.x0, f.x1);
    const ys = linearScale(0, 1, f.y1, f.y0);
    drawAxes(svg, f, xs, ys, "m/(P+1)", "s_m");
    if (files.trotterized.length === 0) warnEmpty(svg, f, "no trotterized files");
    files.trotterized.forEach(({ table }, i) => {
      const pts = sCurvePoints(table);
      const steps: Array<[number, number]> = [];
      pts.forEach(([x, y], k) => {
        const xPrev = k === 0 ? 0 : (pts[k - 1][0] + x) / 2;
        const xNext = k === pts.length - 1 ? 1 : (pts[k + 1][0] + x) / 2;
        steps.push([xs.map(xPrev), ys.map(y)], [xs.map(xNext), ys.map(y)]);
      });
      svg.polyline(steps, shade(i, files.trotterized.length));
    });
  }
  // (d) infidelities vs P
  {
    const f = frames[3];
    const cols = ["infid_qaoa", "infid_curve", "infid_trotterized"];
    requireColumns(files.summary, ["P", ...cols]);
    const pIdx = files.summary.columns.indexOf("P");
    const pVals = files.summary.rows.map((r) => r[pIdx]);
    const yVals: number[] = [];
    for (const c of cols) {
      const ci = files.summary.columns.indexOf(c);
      for (const r of files.summary.rows) yVals.push(r[ci]);
    }
    const [plo, phi] = extent(pVals);
    const [ylo, yhi] = positiveExtent(yVals);
    const xs = linearScale(plo - 0.5, phi + 0.5, f.x0, f.x1);
    const ys = logScale(Math.max(ylo / 2, 1e-16), Math.max(yhi * 2, 1e-12), f.y1, f.y0);
    drawAxes(svg, f, xs, ys, "P", "infidelity");
    if (files.summary.rows.length === 0) warnEmpty(svg, f, "empty summary.csv");
    cols.forEach((c, k) => {
      const ci = files.summary.columns.indexOf(c);
      const pts: Array<[number, number]> = [];
      for (const r of files.summary.rows) {
        if (r[ci] > 0) pts.push([xs.map(r[pIdx]), ys.map(r[ci])]);
      }
      svg.polyline(pts, PALETTE[k]);
      for (const [px, py] of pts) svg.circle(px, py, 2.6, PALETTE[k]);
      svg.text(f.x1 - 8, f.y0 + 14 + 14 * k, c, 10, "end", PALETTE[k]);
    });
  }
  return svg.render();
}

export function render(spec: PlotSpec): string {
  switch (spec.kind) {
    case "dt_scaling":
      return renderScaling(spec, "dt");
    case "T_scaling":
      return renderScaling(spec, "T");
    case "population":
      return renderPopulation(spec);
    case "qaoa_panels":
      return renderQaoaPanels(spec);
    default:
      throw new SchemaError(`unknown plot kind '${(spec as PlotSpec).kind}'`);
  }
}
