/** Pathway view-model: compartment lanes, node badges, live causal edges. */

import { AgentObs, ProteinObs, ReceptorObs, TraceEntry } from "./api.js";
import { SessionStore } from "./state.js";

export interface NodeView {
  identity: string;
  lane: string;
  badge: string;
  className: string;
}

export interface EdgeView {
  from: string;
  to: string;
  via: string;
}

export function badgeFor(obs: AgentObs): string {
  if (obs.kind === "receptor") {
    const r = obs as ReceptorObs;
    return `AS=${r.as}`;
  }
  if (obs.kind === "protein") {
    const p = obs as ProteinObs;
    const fraction = p.iic > 0 ? p.aac / p.iic : 0;
    return fraction.toFixed(2);
  }
  return "ligand";
}

/** Nodes grouped into lanes mirroring the session's level order. */
export function laneLayout(store: SessionStore): Map<string, NodeView[]> {
  const lanes = new Map<string, NodeView[]>();
  for (const level of store.levels) {
    lanes.set(level, []);
  }
  const names = [...store.agents.keys(), ...store.knockedOut].sort();
  for (const identity of names) {
    const obs = store.agents.get(identity);
    if (obs) {
      lanes.get(obs.compartment)?.push({
        identity,
        lane: obs.compartment,
        badge: badgeFor(obs),
        className: "node",
      });
    } else {
      // knocked-out agents stay visible, greyed, in the first lane they fit
      const lane = store.levels[0] ?? "membrane";
      lanes.get(lane)?.push({
        identity,
        lane,
        badge: "KO",
        className: "node knocked-out",
      });
    }
  }
  return lanes;
}

/**
 * Causal edges observed so far, derived from trace rule ids of the form
 * "owner/<behaviour>/<partner>".  Only interaction rules draw an edge.
 */
export function edgesFromTrace(trace: TraceEntry[]): EdgeView[] {
  const seen = new Set<string>();
  const edges: EdgeView[] = [];
  for (const entry of trace) {
    const parts = entry.rule.split("/");
    if (parts.length !== 3) continue;
    const [owner, behaviour, partner] = parts;
    if (behaviour !== "ipv" && behaviour !== "lv") continue;
    const key = `${owner}->${partner}`;
    if (seen.has(key) || owner === partner) continue;
    seen.add(key);
    edges.push({ from: owner, to: partner, via: behaviour });
  }
  return edges;
}
