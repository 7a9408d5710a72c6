/** Linear and logarithmic axis scales with deterministic tick placement. */

export interface Scale {
  map(x: number): number;
  ticks(): number[];
  domain: [number, number];
}

export function linearScale(lo: number, hi: number, a: number, b: number): Scale {
  if (!(hi > lo)) hi = lo + 1;
  const span = hi - lo;
  const step = niceStep(span / 5);
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-12 * span; t += step) {
    ticks.push(Number(t.toPrecision(12)));
  }
  return {
    map: (x) => a + ((x - lo) / span) * (b - a),
    ticks: () => ticks,
    domain: [lo, hi],
  };
}

export function logScale(lo: number, hi: number, a: number, b: number): Scale {
  lo = Math.max(lo, 1e-300);
  if (!(hi > lo)) hi = lo * 10;
  const llo = Math.log10(lo);
  const lhi = Math.log10(hi);
  const ticks: number[] = [];
  for (let e = Math.ceil(llo); e <= Math.floor(lhi); e += 1) {
    ticks.push(Math.pow(10, e));
  }
  if (ticks.length === 0) ticks.push(lo, hi);
  return {
    map: (x) => a + ((Math.log10(Math.max(x, 1e-300)) - llo) / (lhi - llo)) * (b - a),
    ticks: () => ticks,
    domain: [lo, hi],
  };
}

function niceStep(raw: number): number {
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const r = raw / mag;
  if (r <= 1) return mag;
  if (r <= 2) return 2 * mag;
  if (r <= 5) return 5 * mag;
  return 10 * mag;
}

export function tickLabel(x: number): string {
  if (x === 0) return "0";
  const e = Math.log10(Math.abs(x));
  if (e >= -3 && e <= 4 && Number.isInteger(Number(x.toPrecision(10)))) {
    return String(Number(x.toPrecision(10)));
  }
  if (Number.isInteger(e)) return `1e${e}`;
  return x.toPrecision(3);
}

export function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (!Number.isFinite(v)) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!Number.isFinite(lo)) return [0, 1];
  return [lo, hi];
}

export function positiveExtent(values: number[]): [number, number] {
  const pos = values.filter((v) => Number.isFinite(v) && v > 0);
  if (pos.length === 0) return [1e-12, 1];
  return [Math.min(...pos), Math.max(...pos)];
}
