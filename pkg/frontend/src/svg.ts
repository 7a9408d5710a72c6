/** Deterministic SVG assembly: fixed precision, appearance order only. */

export function fmt(x: number): string {
  if (!Number.isFinite(x)) return "0";
  if (x === 0) return "0";
  const s = x.toPrecision(6);
  // trim trailing zeros without locale involvement
  return s.includes("e") ? s : s.replace(/\.?0+$/, "");
}

export class Svg {
  private parts: string[] = [];

  constructor(readonly width: number, readonly height: number) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
        `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
      `<rect width="${width}" height="${height}" fill="white"/>`,
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke = "#222", width = 1, dash = "") {
    const d = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ` +
        `stroke="${stroke}" stroke-width="${width}"${d}/>`,
    );
  }

  polyline(points: Array<[number, number]>, stroke: string, width = 1.5, dash = "") {
    if (points.length === 0) return;
    const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    const d = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="${width}"${d}/>`,
    );
  }

  circle(x: number, y: number, r: number, fill: string) {
    this.parts.push(`<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${fmt(r)}" fill="${fill}"/>`);
  }

  text(x: number, y: number, content: string, size = 11, anchor = "start", fill = "#222") {
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" font-size="${size}" text-anchor="${anchor}" ` +
        `fill="${fill}">${escapeXml(content)}</text>`,
    );
  }

  rect(x: number, y: number, w: number, h: number, fill: string, opacity = 1) {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" ` +
        `fill="${fill}" opacity="${opacity}"/>`,
    );
  }

  render(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}

function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
  "#8c564b", "#17becf", "#7f7f7f", "#bcbd22", "#e377c2",
];

/** Shade from light to dark for depth-ordered families. */
export function shade(i: number, n: number): string {
  const t = n <= 1 ? 1 : i / (n - 1);
  const v = Math.round(200 - 170 * t);
  return `rgb(${v},${v},${255 - Math.round(60 * t)})`;
}
