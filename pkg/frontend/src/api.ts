/** Typed HTTP + server-sent-event client for the lab-service. */

export interface ReceptorObs {
  kind: "receptor";
  compartment: string;
  ss: number;
  ps: number;
  as: number;
  bound: boolean;
}

export interface ProteinObs {
  kind: "protein";
  compartment: string;
  aac: number;
  iac: number;
  iic: number;
}

export interface LigandObs {
  kind: "ligand";
  compartment: string;
}

export type AgentObs = ReceptorObs | ProteinObs | LigandObs;

export interface SignalView {
  id: number;
  kind: string;
  subject: string;
  magnitude?: number;
  level?: string;
  tick?: number;
}

export interface TraceEntry {
  tick: number;
  agent: string;
  rule: string;
  consumed: number[];
  produced: number[];
  level_span: number[];
  error: string | null;
}

export interface Snapshot {
  session: string;
  tick: number;
  status: string;
  levels: string[];
  agents: Record<string, AgentObs>;
  signals: Record<string, SignalView[]>;
  trace: TraceEntry[];
}

export interface Delta {
  tick: number;
  changed_agents: Record<string, AgentObs>;
  removed_agents: string[];
  new_trace: TraceEntry[];
  new_signals: SignalView[];
}

export interface GapMarker {
  gap: true;
  first_missed_tick: number;
  last_missed_tick: number;
}

export type StreamMessage = Delta | GapMarker;

export function isGap(msg: StreamMessage): msg is GapMarker {
  return (msg as GapMarker).gap === true;
}

export type PerturbationKind = "inject-ligand" | "knockout-agent" | "set-kinetics";

/** Service error, carrying the {code, message} body verbatim. */
export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function unwrap<T>(response: Response): Promise<T> {
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    throw new ApiError(
      response.status,
      body.code ?? "HttpError",
      body.message ?? response.statusText,
    );
  }
  return body as T;
}

export class LabClient {
  constructor(public readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return fetch(this.url(path), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    }).then((r) => unwrap<T>(r));
  }

  createSession(body: { name?: string; pathway?: unknown }): Promise<{ id: string }> {
    return this.post("/sessions", body);
  }

  advance(id: string, ticks: number): Promise<Snapshot> {
    return this.post(`/sessions/${id}/advance`, { ticks });
  }

  perturb(
    id: string,
    kind: PerturbationKind,
    payload: Record<string, unknown>,
  ): Promise<{ applied_at_tick: number }> {
    return this.post(`/sessions/${id}/perturb`, { kind, payload });
  }

  snapshot(id: string): Promise<Snapshot> {
    return fetch(this.url(`/sessions/${id}/snapshot`)).then((r) => unwrap<Snapshot>(r));
  }

  replay(id: string): Promise<Snapshot> {
    return fetch(this.url(`/sessions/${id}/replay`)).then((r) => unwrap<Snapshot>(r));
  }

  deleteSession(id: string): Promise<{ deleted: string }> {
    return fetch(this.url(`/sessions/${id}`), { method: "DELETE" }).then((r) =>
      unwrap<{ deleted: string }>(r),
    );
  }

  /**
   * Consume the SSE stream, invoking onMessage per frame.  Resolves when the
   * server closes the stream or the signal aborts.  maxEvents asks the server
   * to close after that many frames, which keeps headless runs bounded.
   */
  async stream(
    id: string,
    onMessage: (msg: StreamMessage) => void,
    opts: { maxEvents?: number; signal?: AbortSignal } = {},
  ): Promise<void> {
    const query = opts.maxEvents ? `?max_events=${opts.maxEvents}` : "";
    const response = await fetch(this.url(`/sessions/${id}/stream${query}`), {
      signal: opts.signal,
    });
    if (!response.ok || !response.body) {
      await unwrap(response);
      return;
    }
    const reader = response.body.getReader();
    const decoder = new TextDecoder();
    let buffered = "";
    for (;;) {
      const { done, value } = await reader.read();
      if (done) break;
      buffered += decoder.decode(value, { stream: true });
      let boundary;
      while ((boundary = buffered.indexOf("\n\n")) >= 0) {
        const frame = buffered.slice(0, boundary);
        buffered = buffered.slice(boundary + 2);
        for (const line of frame.split("\n")) {
          if (line.startsWith("data: ")) {
            onMessage(JSON.parse(line.slice(6)) as StreamMessage);
          }
        }
      }
    }
  }
}
