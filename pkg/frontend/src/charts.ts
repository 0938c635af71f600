/** Concentration/activity chart geometry and the CSV export.
 *
 * The export reproduces the simulator's curves-csv format byte for byte so a
 * file downloaded from the browser diffs clean against a command-line run.
 */

import { SessionStore } from "./state.js";

export const CURVES_HEADER = [
  "tick",
  "agent",
  "compartment",
  "aac_nM",
  "iac_nM",
  "ss",
  "ps",
  "as",
  "firings",
];

/** Mirror of Python's "%.12g" float formatting. */
export function fmtG12(value: number): string {
  if (value === 0) return "0";
  let out = value.toPrecision(12);
  if (out.includes("e")) {
    const [mantissa, exponent] = out.split("e");
    const trimmed = mantissa.replace(/\.?0+$/, "");
    const sign = exponent[0] === "-" ? "-" : "+";
    const digits = exponent.replace(/[+-]/, "").padStart(2, "0");
    return `${trimmed}e${sign}${digits}`;
  }
  if (out.includes(".")) {
    out = out.replace(/0+$/, "").replace(/\.$/, "");
  }
  return out;
}

export function buildCurvesCsv(store: SessionStore): string {
  const lines = [CURVES_HEADER.join(",")];
  const agents = [...store.agents.keys()].sort();
  const ticks = new Set<number>();
  for (const points of store.series.values()) {
    for (const p of points) ticks.add(p.tick);
  }
  for (const points of store.stateSeries.values()) {
    for (const p of points) ticks.add(p.tick);
  }
  for (const tick of [...ticks].sort((a, b) => a - b)) {
    for (const agent of agents) {
      const obs = store.agents.get(agent)!;
      const fired = store.firingsAt(agent, tick);
      if (obs.kind === "protein") {
        const point = store.seriesFor(agent).find((p) => p.tick === tick);
        if (!point) continue;
        lines.push(
          [tick, agent, obs.compartment, fmtG12(point.aac), fmtG12(point.iac),
           "", "", "", fired].join(","),
        );
      } else if (obs.kind === "receptor") {
        const point = store.stateSeries.get(agent)?.find((p) => p.tick === tick);
        if (!point) continue;
        lines.push(
          [tick, agent, obs.compartment, "", "", point.ss, point.ps, point.as,
           fired].join(","),
        );
      } else {
        lines.push([tick, agent, obs.compartment, "", "", "", "", "", fired].join(","));
      }
    }
  }
  return lines.join("\r\n") + "\r\n";
}

/** SVG polyline points attribute for one series, scaled to width x height. */
export function linePoints(
  values: number[],
  width: number,
  height: number,
  maxY: number,
): string {
  if (values.length === 0) return "";
  const stepX = values.length > 1 ? width / (values.length - 1) : 0;
  const scaleY = maxY > 0 ? height / maxY : 0;
  return values
    .map((v, i) => `${(i * stepX).toFixed(2)},${(height - v * scaleY).toFixed(2)}`)
    .join(" ");
}
