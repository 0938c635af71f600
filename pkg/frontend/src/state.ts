/** Client-side session state: snapshot + deltas in, rendered view-model out.
 *
 * The store never simulates anything; every number it holds arrived in a
 * service message.  A gap marker flips needsResync so the owner knows to pull
 * a fresh snapshot before trusting the view again.
 */

import {
  AgentObs,
  Delta,
  ProteinObs,
  Snapshot,
  StreamMessage,
  TraceEntry,
  isGap,
} from "./api.js";

export interface SeriesPoint {
  tick: number;
  aac: number;
  iac: number;
}

export interface StatePoint {
  tick: number;
  ss: number;
  ps: number;
  as: number;
}

export class SessionStore {
  sessionId: string | null = null;
  tick = 0;
  status = "paused";
  levels: string[] = [];
  agents = new Map<string, AgentObs>();
  knockedOut = new Set<string>();
  needsResync = false;
  /** per-protein concentration-time points, appended once per tick */
  series = new Map<string, SeriesPoint[]>();
  /** per-receptor state-time points, appended once per tick */
  stateSeries = new Map<string, StatePoint[]>();
  /** per-tick rule-firing counts, keyed by agent */
  firings = new Map<string, Map<number, number>>();
  trace: TraceEntry[] = [];
  lastGap: { first: number; last: number } | null = null;

  applySnapshot(snap: Snapshot): void {
    this.sessionId = snap.session;
    this.tick = snap.tick;
    this.status = snap.status;
    this.levels = snap.levels.slice();
    this.agents = new Map(Object.entries(snap.agents));
    this.trace = snap.trace.slice();
    this.needsResync = false;
    if (this.series.size === 0) {
      this.recordSeriesPoint();
    }
  }

  applyDelta(msg: StreamMessage): void {
    if (isGap(msg)) {
      this.needsResync = true;
      this.lastGap = { first: msg.first_missed_tick, last: msg.last_missed_tick };
      return;
    }
    const delta = msg as Delta;
    this.tick = delta.tick;
    for (const [identity, obs] of Object.entries(delta.changed_agents)) {
      this.agents.set(identity, obs);
    }
    for (const identity of delta.removed_agents) {
      this.agents.delete(identity);
      this.knockedOut.add(identity);
    }
    this.trace.push(...delta.new_trace);
    for (const entry of delta.new_trace) {
      let perTick = this.firings.get(entry.agent);
      if (!perTick) {
        perTick = new Map();
        this.firings.set(entry.agent, perTick);
      }
      perTick.set(entry.tick, (perTick.get(entry.tick) ?? 0) + 1);
    }
    this.recordSeriesPoint();
  }

  private recordSeriesPoint(): void {
    for (const [identity, obs] of this.agents) {
      if (obs.kind === "protein") {
        const protein = obs as ProteinObs;
        let points = this.series.get(identity);
        if (!points) {
          points = [];
          this.series.set(identity, points);
        }
        points.push({ tick: this.tick, aac: protein.aac, iac: protein.iac });
      } else if (obs.kind === "receptor") {
        let points = this.stateSeries.get(identity);
        if (!points) {
          points = [];
          this.stateSeries.set(identity, points);
        }
        points.push({ tick: this.tick, ss: obs.ss, ps: obs.ps, as: obs.as });
      }
    }
  }

  seriesFor(identity: string): SeriesPoint[] {
    return this.series.get(identity) ?? [];
  }

  firingsAt(identity: string, tick: number): number {
    return this.firings.get(identity)?.get(tick) ?? 0;
  }

  get connected(): boolean {
    return this.sessionId !== null;
  }
}
