/** Browser entry point: wires the store, graph, charts and controls. */

import { ApiError, LabClient, StreamMessage } from "./api.js";
import { buildCurvesCsv, linePoints } from "./charts.js";
import {
  ControlState,
  PerturbationForm,
  controlsDisabled,
  payloadFor,
  validatePerturbation,
} from "./controls.js";
import { edgesFromTrace, laneLayout } from "./graph.js";
import { SessionStore } from "./state.js";

const $ = (id: string) => document.getElementById(id)!;

const store = new SessionStore();
const control: ControlState = {
  sessionId: null,
  runMode: "paused",
  selectedAgents: [],
  inFlight: false,
};

let client = new LabClient(window.location.origin);
let streamAbort: AbortController | null = null;
let runTimer: number | null = null;

function setBanner(text: string, isError = false): void {
  const banner = $("banner");
  banner.textContent = text;
  banner.className = isError ? "banner error" : "banner";
}

function refreshControls(): void {
  const disabled = controlsDisabled(control);
  for (const el of document.querySelectorAll<HTMLButtonElement>("button[data-needs-session]")) {
    el.disabled = disabled;
  }
}

function renderGraph(): void {
  const root = $("graph");
  root.innerHTML = "";
  for (const [lane, nodes] of laneLayout(store)) {
    const row = document.createElement("div");
    row.className = "lane";
    const label = document.createElement("span");
    label.className = "lane-label";
    label.textContent = lane;
    row.appendChild(label);
    for (const node of nodes) {
      const el = document.createElement("span");
      el.className = node.className;
      el.textContent = `${node.identity} ${node.badge}`;
      el.onclick = () => toggleSelection(node.identity);
      if (control.selectedAgents.includes(node.identity)) {
        el.classList.add("selected");
      }
      row.appendChild(el);
    }
    root.appendChild(row);
  }
  $("edges").textContent = edgesFromTrace(store.trace)
    .map((e) => `${e.from} → ${e.to}`)
    .join("   ");
  $("tick").textContent = `tick ${store.tick} (${store.status})`;
}

function renderCharts(): void {
  const svg = $("chart");
  svg.innerHTML = "";
  const width = 560;
  const height = 180;
  const palette = ["#0b6", "#06b", "#b60", "#b06", "#660"];
  control.selectedAgents.forEach((agent, i) => {
    const points = store.seriesFor(agent);
    if (points.length === 0) return;
    const maxY = Math.max(...points.map((p) => p.aac + p.iac));
    for (const [key, dash] of [["aac", ""], ["iac", "4 3"]] as const) {
      const line = document.createElementNS("http://www.w3.org/2000/svg", "polyline");
      line.setAttribute(
        "points",
        linePoints(points.map((p) => p[key]), width, height, maxY),
      );
      line.setAttribute("fill", "none");
      line.setAttribute("stroke", palette[i % palette.length]);
      if (dash) line.setAttribute("stroke-dasharray", dash);
      svg.appendChild(line);
    }
  });
  $("chart-legend").textContent = control.selectedAgents.length
    ? control.selectedAgents.join(", ") + "  (solid AAC, dashed IAC)"
    : "select nodes to chart";
}

function toggleSelection(identity: string): void {
  const i = control.selectedAgents.indexOf(identity);
  if (i >= 0) control.selectedAgents.splice(i, 1);
  else control.selectedAgents.push(identity);
  render();
}

function render(): void {
  renderGraph();
  renderCharts();
  refreshControls();
}

async function resync(): Promise<void> {
  if (!control.sessionId) return;
  store.applySnapshot(await client.snapshot(control.sessionId));
  render();
}

function onStreamMessage(msg: StreamMessage): void {
  store.applyDelta(msg);
  if (store.needsResync) {
    setBanner(
      `stream gap: missed ticks ${store.lastGap?.first}–${store.lastGap?.last}; resyncing`,
    );
    void resync();
  } else {
    render();
  }
}

async function connect(sessionId: string): Promise<void> {
  try {
    store.applySnapshot(await client.snapshot(sessionId));
  } catch (err) {
    control.sessionId = null;
    refreshControls();
    setBanner(err instanceof ApiError ? `${err.code}: ${err.message}` : String(err), true);
    return;
  }
  control.sessionId = sessionId;
  setBanner(`connected to ${sessionId}`);
  streamAbort?.abort();
  streamAbort = new AbortController();
  void client
    .stream(sessionId, onStreamMessage, { signal: streamAbort.signal })
    .catch(() => setBanner("stream closed", true));
  render();
}

async function advance(ticks: number): Promise<void> {
  if (!control.sessionId) return;
  control.inFlight = true;
  refreshControls();
  try {
    await client.advance(control.sessionId, ticks);
  } finally {
    control.inFlight = false;
    refreshControls();
  }
}

function wire(): void {
  $("connect").onclick = async () => {
    client = new LabClient(($("base-url") as HTMLInputElement).value);
    const existing = ($("session-id") as HTMLInputElement).value.trim();
    if (existing) {
      await connect(existing);
    } else {
      const { id } = await client.createSession({ name: "bundled-mapk" });
      ($("session-id") as HTMLInputElement).value = id;
      await connect(id);
    }
  };

  $("step").onclick = () => void advance(1);
  $("run").onclick = () => {
    control.runMode = "running";
    runTimer = window.setInterval(() => void advance(1), 150);
  };
  $("pause").onclick = () => {
    control.runMode = "paused";
    if (runTimer !== null) window.clearInterval(runTimer);
  };

  $("perturb").onclick = async () => {
    const kind = ($("perturb-kind") as HTMLSelectElement).value as PerturbationForm["kind"];
    const form: PerturbationForm = {
      kind,
      ligand: ($("perturb-ligand") as HTMLInputElement).value || undefined,
      magnitude: parseFloat(($("perturb-magnitude") as HTMLInputElement).value),
      agent: ($("perturb-agent") as HTMLInputElement).value || undefined,
    };
    const verdict = validatePerturbation(form);
    const inline = $("perturb-error");
    if (!verdict.ok) {
      inline.textContent = verdict.error ?? "invalid";
      return;
    }
    inline.textContent = "";
    try {
      const ack = await client.perturb(control.sessionId!, kind, payloadFor(form));
      setBanner(`perturbation queued for tick ${ack.applied_at_tick}`);
    } catch (err) {
      inline.textContent =
        err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
    }
  };

  $("export-csv").onclick = () => {
    const blob = new Blob([buildCurvesCsv(store)], { type: "text/csv" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = "curves.csv";
    link.click();
    URL.revokeObjectURL(link.href);
  };

  refreshControls();
}

wire();
