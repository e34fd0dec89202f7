/** Minimal hand-rolled SVG charts: one line-chart builder and one
 *  winner-map builder, both pure string generation so output is
 *  deterministic for a given input. */

export interface Series {
  label: string;
  color: string;
  x: number[];
  y: number[];
  width?: number;
  dash?: string;
}

export interface HLine {
  value: number;
  label: string;
  color: string;
  dash?: string;
}

export interface VBand {
  from: number;
  to: number;
  label: string;
  color: string;
}

export interface LineChartOpts {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  hLines?: HLine[];
  bands?: VBand[];
  yMin?: number;
}

const W = 700;
const H = 300;
const ML = 64;
const MR = 20;
const MT = 34;
const MB = 46;
const PW = W - ML - MR;
const PH = H - MT - MB;

export function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function niceTicks(min: number, max: number, count: number): number[] {
  const range = max - min || 1;
  const rough = range / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((n) => n >= rough) ?? rough;
  const start = Math.ceil(min / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= max + step * 0.01; v += step) ticks.push(v);
  return ticks;
}

function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e6 || a < 1e-3) return v.toExponential(1).replace("e+", "e");
  if (Number.isInteger(v)) return String(v);
  return String(parseFloat(v.toPrecision(4)));
}

function frame(title: string, xLabel: string, yLabel: string): string {
  let s = "";
  s += `<text x="${ML}" y="18" font-size="11" font-weight="600" fill="#222">${esc(title)}</text>\n`;
  s += `<line x1="${ML}" y1="${MT}" x2="${ML}" y2="${MT + PH}" stroke="#333" stroke-width="0.8"/>\n`;
  s += `<line x1="${ML}" y1="${MT + PH}" x2="${ML + PW}" y2="${MT + PH}" stroke="#333" stroke-width="0.8"/>\n`;
  s += `<text x="${ML + PW / 2}" y="${H - 6}" text-anchor="middle" font-size="9" fill="#444">${esc(xLabel)}</text>\n`;
  s += `<text x="14" y="${MT + PH / 2}" text-anchor="middle" font-size="9" fill="#444" transform="rotate(-90,14,${MT + PH / 2})">${esc(yLabel)}</text>\n`;
  return s;
}

function open(): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${W} ${H}" ` +
    `font-family="Helvetica, Arial, sans-serif">\n<rect width="${W}" height="${H}" fill="#fff"/>\n`
  );
}

export function emptyChart(title: string, xLabel: string, yLabel: string): string {
  let s = open();
  s += frame(title, xLabel, yLabel);
  s += `<text x="${ML + PW / 2}" y="${MT + PH / 2}" text-anchor="middle" font-size="10" fill="#999">no data</text>\n`;
  s += "</svg>\n";
  return s;
}

export function lineChart(opts: LineChartOpts): string {
  const { series, hLines = [], bands = [] } = opts;
  const xs = series.flatMap((sr) => sr.x);
  const ys = series
    .flatMap((sr) => sr.y)
    .concat(hLines.map((h) => h.value))
    .filter((v) => Number.isFinite(v));
  if (xs.length === 0 || ys.length === 0) {
    return emptyChart(opts.title, opts.xLabel, opts.yLabel);
  }

  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  const yLo = opts.yMin ?? Math.min(0, Math.min(...ys));
  const yHi = Math.max(...ys) * 1.06 || 1;
  const xOf = (v: number) => ML + ((v - xMin) / (xMax - xMin || 1)) * PW;
  const yOf = (v: number) => MT + PH - ((v - yLo) / (yHi - yLo || 1)) * PH;

  let s = open();

  for (const band of bands) {
    const x0 = xOf(Math.max(band.from, xMin));
    const x1 = xOf(Math.min(band.to, xMax));
    if (x1 <= x0) continue;
    s += `<rect x="${x0.toFixed(1)}" y="${MT}" width="${(x1 - x0).toFixed(1)}" height="${PH}" fill="${band.color}" opacity="0.18"/>\n`;
    s += `<text x="${((x0 + x1) / 2).toFixed(1)}" y="${MT + 10}" text-anchor="middle" font-size="7" fill="#555">${esc(band.label)}</text>\n`;
  }

  const yTicks = niceTicks(yLo, yHi, 5);
  for (const v of yTicks) {
    const y = yOf(v);
    s += `<line x1="${ML}" y1="${y.toFixed(1)}" x2="${ML + PW}" y2="${y.toFixed(1)}" stroke="#eee" stroke-width="0.5"/>\n`;
    s += `<text x="${ML - 5}" y="${(y + 3).toFixed(1)}" text-anchor="end" font-size="7" fill="#666">${esc(fmt(v))}</text>\n`;
  }
  const xTicks = niceTicks(xMin, xMax, 8);
  for (const v of xTicks) {
    const x = xOf(v);
    s += `<line x1="${x.toFixed(1)}" y1="${MT + PH}" x2="${x.toFixed(1)}" y2="${MT + PH + 3}" stroke="#333" stroke-width="0.5"/>\n`;
    s += `<text x="${x.toFixed(1)}" y="${MT + PH + 13}" text-anchor="middle" font-size="7" fill="#666">${esc(fmt(v))}</text>\n`;
  }

  for (const h of hLines) {
    const y = yOf(h.value);
    s += `<line x1="${ML}" y1="${y.toFixed(1)}" x2="${ML + PW}" y2="${y.toFixed(1)}" stroke="${h.color}" stroke-width="1" stroke-dasharray="${h.dash ?? "6,3"}"/>\n`;
  }

  for (const sr of series) {
    const pts: string[] = [];
    for (let i = 0; i < sr.x.length; i++) {
      if (!Number.isFinite(sr.y[i])) continue;
      pts.push(`${xOf(sr.x[i]).toFixed(1)},${yOf(sr.y[i]).toFixed(1)}`);
    }
    if (pts.length === 0) continue;
    s += `<polyline fill="none" stroke="${sr.color}" stroke-width="${sr.width ?? 1.2}" ${sr.dash ? `stroke-dasharray="${sr.dash}" ` : ""}points="${pts.join(" ")}"/>\n`;
  }

  s += frame(opts.title, opts.xLabel, opts.yLabel);

  const entries = [
    ...series.map((sr) => ({ label: sr.label, color: sr.color, dash: sr.dash })),
    ...hLines.map((h) => ({ label: h.label, color: h.color, dash: h.dash ?? "6,3" })),
  ];
  const lw = Math.max(...entries.map((e) => e.label.length)) * 4.6 + 26;
  const lx = ML + PW - lw - 4;
  s += `<rect x="${lx}" y="${MT + 4}" width="${lw}" height="${entries.length * 11 + 6}" rx="2" fill="#fff" fill-opacity="0.85" stroke="#ddd" stroke-width="0.5"/>\n`;
  entries.forEach((e, i) => {
    const y = MT + 12 + i * 11;
    s += `<line x1="${lx + 5}" y1="${y}" x2="${lx + 19}" y2="${y}" stroke="${e.color}" stroke-width="1.4" ${e.dash ? `stroke-dasharray="${e.dash}"` : ""}/>\n`;
    s += `<text x="${lx + 23}" y="${y + 3}" font-size="7" fill="#444">${esc(e.label)}</text>\n`;
  });

  s += "</svg>\n";
  return s;
}

/** One horizontal stripe per trial, colored by winning station; contiguous
 *  runs of the same winner collapse into one rect to keep the file small. */
export interface MapCell {
  trial: number;
  sc: number;
  winner: number;
}

const PALETTE = [
  "#4363d8", "#e6194b", "#3cb44b", "#ffe119", "#f58231", "#911eb4",
  "#42d4f4", "#f032e6", "#bfef45", "#fabed4", "#469990", "#dcbeff",
  "#9a6324", "#fffac8", "#800000", "#aaffc3", "#808000", "#ffd8b1",
  "#000075", "#a9a9a9",
];

export function winnerColor(winner: number): string {
  if (winner < 0) return "#eeeeee";
  return PALETTE[winner % PALETTE.length];
}

export function winnerMap(title: string, cells: MapCell[], numSc: number): string {
  if (cells.length === 0) {
    return emptyChart(title, "subcarrier", "trial");
  }
  const trials = [...new Set(cells.map((c) => c.trial))].sort((a, b) => a - b);
  const rowOf = new Map(trials.map((t, i) => [t, i]));
  const rowH = PH / trials.length;
  const colW = PW / numSc;

  let s = open();
  for (const trial of trials) {
    const rowCells = cells
      .filter((c) => c.trial === trial)
      .sort((a, b) => a.sc - b.sc);
    const y = MT + rowOf.get(trial)! * rowH;
    let runStart = 0;
    for (let i = 1; i <= rowCells.length; i++) {
      if (i < rowCells.length
          && rowCells[i].winner === rowCells[runStart].winner
          && rowCells[i].sc === rowCells[i - 1].sc + 1) {
        continue;
      }
      const x0 = ML + rowCells[runStart].sc * colW;
      const width = (rowCells[i - 1].sc - rowCells[runStart].sc + 1) * colW;
      s += `<rect x="${x0.toFixed(2)}" y="${y.toFixed(2)}" width="${width.toFixed(2)}" height="${Math.max(rowH, 0.5).toFixed(2)}" fill="${winnerColor(rowCells[runStart].winner)}"/>\n`;
      runStart = i;
    }
  }

  s += frame(title, "subcarrier", "trial");
  const xTicks = niceTicks(0, numSc - 1, 8);
  for (const v of xTicks) {
    const x = ML + v * colW;
    s += `<line x1="${x.toFixed(1)}" y1="${MT + PH}" x2="${x.toFixed(1)}" y2="${MT + PH + 3}" stroke="#333" stroke-width="0.5"/>\n`;
    s += `<text x="${x.toFixed(1)}" y="${MT + PH + 13}" text-anchor="middle" font-size="7" fill="#666">${v}</text>\n`;
  }
  const yStep = Math.max(1, Math.ceil(trials.length / 8));
  for (let i = 0; i < trials.length; i += yStep) {
    const y = MT + i * rowH + rowH / 2;
    s += `<text x="${ML - 5}" y="${(y + 2).toFixed(1)}" text-anchor="end" font-size="7" fill="#666">${trials[i]}</text>\n`;
  }
  s += `<text x="${ML + PW}" y="${MT - 6}" text-anchor="end" font-size="7" fill="#888">gray = unsold</text>\n`;
  s += "</svg>\n";
  return s;
}
