/** The six figure kinds, each mapping one harness CSV onto one SVG. */

import { mkdirSync, writeFileSync } from "fs";
import path from "path";
import { readCsv, Row, SchemaError } from "./csv.js";
import { emptyChart, lineChart, winnerMap, Series, VBand } from "./svg.js";

export const FIGURE_KINDS = [
  "allocation_map",
  "capacity_compare",
  "fairness",
  "power_sweep",
  "overhead",
  "deal_price",
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface FigureSpec {
  kind: FigureKind;
  input: string;
  output: string;
}

interface KindDef {
  csv: string;
  columns: string[];
  build: (rows: Row[]) => string;
}

const COLORS = { auction: "#4363d8", random: "#e6194b", limit: "#3cb44b" };

function groupBy(rows: Row[], key: string): Map<number, Row[]> {
  const out = new Map<number, Row[]>();
  for (const row of rows) {
    const k = row[key];
    const bucket = out.get(k);
    if (bucket) bucket.push(row);
    else out.set(k, [row]);
  }
  return out;
}

function sum(values: number[]): number {
  return values.reduce((a, b) => a + b, 0);
}

function perTrialTotals(rows: Row[], column: string): { x: number[]; y: number[] } {
  const trials = [...groupBy(rows, "trial").entries()].sort((a, b) => a[0] - b[0]);
  return {
    x: trials.map(([t]) => t),
    y: trials.map(([, bucket]) => sum(bucket.map((r) => r[column]))),
  };
}

function buildCapacityCompare(rows: Row[]): string {
  const auction = perTrialTotals(rows, "auction_bps");
  const random = perTrialTotals(rows, "random_bps");
  const limit = perTrialTotals(rows, "limit_bps");
  return lineChart({
    title: "Total downlink capacity per trial",
    xLabel: "trial",
    yLabel: "capacity (bit/s)",
    yMin: 0,
    series: [
      { label: "auction", color: COLORS.auction, ...auction },
      { label: "random", color: COLORS.random, ...random },
      { label: "capacity limit", color: COLORS.limit, dash: "5,3", ...limit },
    ],
  });
}

function buildFairness(rows: Row[]): string {
  const x = rows.map((r) => r.trial);
  return lineChart({
    title: "Per-station capacity spread per trial",
    xLabel: "trial",
    yLabel: "std dev of per-station capacity (bit/s)",
    yMin: 0,
    series: [
      { label: "auction", color: COLORS.auction, x, y: rows.map((r) => r.auction_std_bps) },
      { label: "random", color: COLORS.random, x, y: rows.map((r) => r.random_std_bps) },
      { label: "capacity limit", color: COLORS.limit, dash: "5,3", x, y: rows.map((r) => r.limit_std_bps) },
    ],
  });
}

function buildPowerSweep(rows: Row[]): string {
  const x = rows.map((r) => r.tx_power_db);
  return lineChart({
    title: "Total capacity across transmit power",
    xLabel: "transmit power (dB over noise floor)",
    yLabel: "mean total capacity (bit/s)",
    yMin: 0,
    series: [
      { label: "auction", color: COLORS.auction, x, y: rows.map((r) => r.auction_total_bps) },
      { label: "random", color: COLORS.random, x, y: rows.map((r) => r.random_total_bps) },
      { label: "capacity limit", color: COLORS.limit, dash: "5,3", x, y: rows.map((r) => r.limit_total_bps) },
    ],
  });
}

function buildOverhead(rows: Row[]): string {
  const trials = [...groupBy(rows, "trial").entries()].sort((a, b) => a[0] - b[0]);
  const x = trials.map(([t]) => t);
  const mean = trials.map(
    ([, bucket]) => sum(bucket.map((r) => r.auction_bits)) / bucket.length
  );
  const fullBits = rows.length ? rows[0].full_feedback_bits : 0;
  return lineChart({
    title: "Uplink overhead per auction",
    xLabel: "trial",
    yLabel: "bits per station",
    yMin: 0,
    series: [{ label: "bid messages (mean over stations)", color: COLORS.auction, x, y: mean }],
    hLines: rows.length
      ? [{ value: fullBits, label: `full feedback (${fullBits} bits)`, color: "#555" }]
      : [],
  });
}

function buildDealPrice(rows: Row[]): string {
  const sorted = [...rows].sort((a, b) => a.sc - b.sc);
  const x = sorted.map((r) => r.sc);
  const bands: VBand[] = [];
  let start: number | null = null;
  for (let i = 0; i <= sorted.length; i++) {
    const interfered = i < sorted.length && sorted[i].interference_power > 0;
    if (interfered && start === null) start = sorted[i].sc;
    if (!interfered && start !== null) {
      bands.push({
        from: start,
        to: sorted[i - 1].sc,
        label: "interfered band",
        color: "#e6194b",
      });
      start = null;
    }
  }
  const series: Series[] = [
    { label: "mean deal price", color: COLORS.auction, x, y: sorted.map((r) => r.mean_deal_price) },
  ];
  return lineChart({
    title: "Average deal price by subcarrier",
    xLabel: "subcarrier",
    yLabel: "mean deal price",
    yMin: 0,
    series,
    bands,
  });
}

function buildAllocationMap(rows: Row[]): string {
  if (rows.length === 0) return emptyChart("Subcarrier winners by trial", "subcarrier", "trial");
  const numSc = Math.max(...rows.map((r) => r.sc)) + 1;
  return winnerMap(
    "Subcarrier winners by trial",
    rows.map((r) => ({ trial: r.trial, sc: r.sc, winner: r.winner })),
    numSc
  );
}

export const KINDS: Record<FigureKind, KindDef> = {
  allocation_map: {
    csv: "allocation_map.csv",
    columns: ["trial", "sc", "winner", "deal_price", "winning_round"],
    build: buildAllocationMap,
  },
  capacity_compare: {
    csv: "capacity_per_gs.csv",
    columns: ["trial", "gs", "auction_bps", "random_bps", "limit_bps"],
    build: buildCapacityCompare,
  },
  fairness: {
    csv: "fairness.csv",
    columns: [
      "trial",
      "auction_std_bps",
      "random_std_bps",
      "limit_std_bps",
      "auction_more_even_than_limit",
    ],
    build: buildFairness,
  },
  power_sweep: {
    csv: "power_sweep.csv",
    columns: [
      "tx_power_db",
      "auction_total_bps",
      "random_total_bps",
      "limit_total_bps",
      "power_offset_db",
    ],
    build: buildPowerSweep,
  },
  overhead: {
    csv: "overhead.csv",
    columns: ["trial", "gs", "auction_bits", "full_feedback_bits"],
    build: buildOverhead,
  },
  deal_price: {
    csv: "deal_price.csv",
    columns: ["sc", "mean_deal_price", "sold_fraction", "interference_power"],
    build: buildDealPrice,
  },
};

export function isFigureKind(kind: string): kind is FigureKind {
  return (FIGURE_KINDS as readonly string[]).includes(kind);
}

/** Render one figure; reads the CSV, never writes anywhere but `output`. */
export function render(spec: FigureSpec): void {
  const def = KINDS[spec.kind];
  if (!def) {
    throw new SchemaError(`unknown figure kind "${spec.kind}"`);
  }
  const rows = readCsv(spec.input, def.columns);
  const parent = path.dirname(spec.output);
  if (parent && parent !== ".") mkdirSync(parent, { recursive: true });
  writeFileSync(spec.output, def.build(rows));
}

/** Render every kind from a harness export directory, <kind>.svg each. */
export function renderAll(runDir: string, outDir?: string): string[] {
  const target = outDir ?? runDir;
  const written: string[] = [];
  for (const kind of FIGURE_KINDS) {
    const output = path.join(target, `${kind}.svg`);
    render({ kind, input: path.join(runDir, KINDS[kind].csv), output });
    written.push(output);
  }
  return written;
}
