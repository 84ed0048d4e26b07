/**
 * Figure builders: each kind maps result rows onto one echarts option,
 * rendered server-side to SVG. Chemical-potential series run dark to
 * bright in increasing mu; truncation schemes are told apart by marker.
 */

import * as echarts from "echarts";
import { ResultRow, requireValues, schemeLabel } from "./csv";

export const FIGURE_KINDS = [
  "EnergyVsAlpha", "ObservablesVsJ", "TotalEnergyVsJ", "GcVsJ", "TimingBars",
] as const;
export type FigureKind = (typeof FIGURE_KINDS)[number];

const WIDTH = 840;
const HEIGHT = 560;
const SYMBOLS = ["circle", "rect", "triangle", "diamond", "pin", "arrow"];

function sorted<T>(values: T[]): T[] {
  return [...new Set(values)].sort((a: any, b: any) => a - b);
}

/** Dark-to-bright blues with increasing index. */
function muColor(index: number, count: number): string {
  const t = count > 1 ? index / (count - 1) : 0;
  const channel = (lo: number, hi: number) =>
    Math.round(lo + (hi - lo) * t);
  return `rgb(${channel(15, 120)},${channel(35, 170)},${channel(90, 235)})`;
}

function bySeries(rows: ResultRow[]): Map<string, ResultRow[]> {
  const groups = new Map<string, ResultRow[]>();
  for (const row of rows) {
    const key = `${schemeLabel(row)} mu=${row.mu_over_u}`;
    if (!groups.has(key)) groups.set(key, []);
    groups.get(key)!.push(row);
  }
  return groups;
}

function seriesStyle(row: ResultRow, mus: number[], schemes: string[]) {
  const muIdx = mus.indexOf(row.mu_over_u);
  const schemeIdx = schemes.indexOf(schemeLabel(row));
  return {
    color: muColor(muIdx, mus.length),
    symbol: SYMBOLS[schemeIdx % SYMBOLS.length],
  };
}

function lineFigure(
  rows: ResultRow[], xField: keyof ResultRow, yField: keyof ResultRow,
  title: string, xName: string, yName: string,
): echarts.EChartsCoreOption {
  const mus = sorted(rows.map((r) => r.mu_over_u));
  const schemes = [...new Set(rows.map(schemeLabel))];
  const series: object[] = [];
  for (const [name, group] of bySeries(rows)) {
    group.sort((a, b) => (a[xField] as number) - (b[xField] as number));
    const style = seriesStyle(group[0], mus, schemes);
    series.push({
      type: "line",
      name,
      data: group.map((r) => [r[xField], r[yField]]),
      itemStyle: { color: style.color },
      lineStyle: { color: style.color },
      symbol: style.symbol,
      symbolSize: 7,
    });
  }
  return {
    animation: false,
    title: { text: title, left: "center" },
    legend: { bottom: 0, type: "plain" },
    xAxis: { type: "value", name: xName, nameLocation: "middle", nameGap: 28 },
    yAxis: { type: "value", name: yName, scale: true },
    grid: { left: 70, right: 30, top: 50, bottom: 80 },
    series,
  };
}

function buildEnergyVsAlpha(rows: ResultRow[]): echarts.EChartsCoreOption {
  requireValues(rows, ["alpha_opt", "e_tot"]);
  return lineFigure(rows, "alpha_opt", "e_tot",
    "Total energy vs tail amplitude", "tail amplitude", "E_tot per site");
}

function buildObservablesVsJ(rows: ResultRow[]): echarts.EChartsCoreOption {
  requireValues(rows, ["phi", "n_mean"]);
  const mus = sorted(rows.map((r) => r.mu_over_u));
  const schemes = [...new Set(rows.map(schemeLabel))];
  const series: object[] = [];
  for (const [name, group] of bySeries(rows)) {
    group.sort((a, b) => a.j_over_u - b.j_over_u);
    const style = seriesStyle(group[0], mus, schemes);
    const common = {
      type: "line",
      itemStyle: { color: style.color },
      lineStyle: { color: style.color },
      symbol: style.symbol,
      symbolSize: 7,
    };
    series.push({
      ...common, name, xAxisIndex: 0, yAxisIndex: 0,
      data: group.map((r) => [r.j_over_u, r.phi]),
    });
    series.push({
      ...common, name, xAxisIndex: 1, yAxisIndex: 1, legendHoverLink: false,
      data: group.map((r) => [r.j_over_u, r.n_mean]),
    });
  }
  return {
    animation: false,
    title: { text: "Order parameter and filling vs hopping", left: "center" },
    legend: { bottom: 0, type: "plain" },
    grid: [
      { left: 70, right: "55%", top: 60, bottom: 80 },
      { left: "55%", right: 30, top: 60, bottom: 80 },
    ],
    xAxis: [
      { type: "value", gridIndex: 0, name: "J/U", nameLocation: "middle", nameGap: 28 },
      { type: "value", gridIndex: 1, name: "J/U", nameLocation: "middle", nameGap: 28 },
    ],
    yAxis: [
      { type: "value", gridIndex: 0, name: "phi", scale: true },
      { type: "value", gridIndex: 1, name: "n", scale: true },
    ],
    series,
  };
}

function buildTotalEnergyVsJ(rows: ResultRow[]): echarts.EChartsCoreOption {
  requireValues(rows, ["e_tot"]);
  return lineFigure(rows, "j_over_u", "e_tot",
    "Total energy per site vs hopping", "J/U", "E_tot per site");
}

function buildGcVsJ(rows: ResultRow[]): echarts.EChartsCoreOption {
  requireValues(rows, ["g_c0"]);
  const mus = sorted(rows.map((r) => r.mu_over_u));
  const schemes = [...new Set(rows.map(schemeLabel))];
  const series: object[] = [];
  for (const [name, group] of bySeries(rows)) {
    group.sort((a, b) => a.j_over_u - b.j_over_u);
    const style = seriesStyle(group[0], mus, schemes);
    const common = {
      type: "line",
      itemStyle: { color: style.color },
      lineStyle: { color: style.color },
      symbol: style.symbol,
      symbolSize: 7,
    };
    series.push({
      ...common, name, xAxisIndex: 0, yAxisIndex: 0,
      data: group.map((r) => [r.j_over_u, r.g_c0]),
    });
    series.push({
      // inset: same data on double log scale, magnitudes only
      ...common, name, xAxisIndex: 1, yAxisIndex: 1, legendHoverLink: false,
      data: group
        .filter((r) => r.j_over_u > 0 && (r.g_c0 as number) !== 0)
        .map((r) => [r.j_over_u, Math.abs(r.g_c0 as number)]),
    });
  }
  return {
    animation: false,
    title: { text: "Equal-time connected correlator vs hopping", left: "center" },
    legend: { bottom: 0, type: "plain" },
    grid: [
      { left: 70, right: 30, top: 50, bottom: 80 },
      { left: "58%", right: 36, top: 70, bottom: "45%" },
    ],
    xAxis: [
      { type: "value", gridIndex: 0, name: "J/U", nameLocation: "middle", nameGap: 28 },
      { type: "log", gridIndex: 1 },
    ],
    yAxis: [
      { type: "value", gridIndex: 0, name: "G_c(0)" },
      { type: "log", gridIndex: 1 },
    ],
    series,
  };
}

function buildTimingBars(rows: ResultRow[]): echarts.EChartsCoreOption {
  requireValues(rows, ["time_ms"]);
  if (rows.every((r) => r.speedup_vs_ref === null)) {
    throw new Error("missing values in required columns: speedup_vs_ref");
  }
  const js = sorted(rows.map((r) => r.j_over_u));
  const schemes = [...new Set(rows.map(schemeLabel))];
  const series: object[] = schemes.map((scheme, idx) => ({
    type: "bar",
    name: scheme,
    itemStyle: { color: muColor(idx, Math.max(schemes.length, 2)) },
    data: js.map((j) => {
      const row = rows.find(
        (r) => schemeLabel(r) === scheme && r.j_over_u === j);
      return row ? row.time_ms : 0;
    }),
  }));
  return {
    animation: false,
    title: { text: "Median convergence time per run", left: "center" },
    legend: { bottom: 0, type: "plain" },
    xAxis: { type: "category", data: js.map(String), name: "J/U",
             nameLocation: "middle", nameGap: 28 },
    yAxis: { type: "value", name: "time (ms)" },
    grid: { left: 80, right: 30, top: 50, bottom: 80 },
    series,
  };
}

const BUILDERS: Record<FigureKind, (rows: ResultRow[]) => echarts.EChartsCoreOption> = {
  EnergyVsAlpha: buildEnergyVsAlpha,
  ObservablesVsJ: buildObservablesVsJ,
  TotalEnergyVsJ: buildTotalEnergyVsJ,
  GcVsJ: buildGcVsJ,
  TimingBars: buildTimingBars,
};

/**
 * The SVG renderer numbers its CSS classes and clip paths with a global
 * instance counter; rewriting those tokens in document order makes the
 * output a pure function of the input.
 */
function canonicalizeSvg(svg: string): string {
  const seen = new Map<string, string>();
  return svg.replace(/zr\d+-[a-z-]*\d+/g, (token) => {
    if (!seen.has(token)) seen.set(token, `zc${seen.size}`);
    return seen.get(token)!;
  });
}

export function renderFigure(kind: string, rows: ResultRow[]): string {
  const builder = BUILDERS[kind as FigureKind];
  if (!builder) {
    throw new Error(
      `unknown figure kind '${kind}'; expected one of ${FIGURE_KINDS.join(", ")}`);
  }
  const option = builder(rows);
  const chart = echarts.init(null, null, {
    renderer: "svg", ssr: true, width: WIDTH, height: HEIGHT,
  });
  try {
    chart.setOption(option);
    return canonicalizeSvg(chart.renderToSVGString());
  } finally {
    chart.dispose();
  }
}
