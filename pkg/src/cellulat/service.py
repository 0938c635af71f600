"""Virtual-laboratory session service.

In-memory sessions over an HTTP JSON API.  Each session owns one world; all
mutations on a session are serialized behind its lock, perturbations apply at
the next tick boundary and are logged so a run can be replayed exactly.
Subscribers receive one delta per tick through a bounded buffer; a slow
consumer loses the oldest deltas and gets a gap marker instead of ever
blocking the simulation.
"""

from __future__ import annotations

import json
import threading
import uuid
from collections import deque
from dataclasses import dataclass

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, StreamingResponse

from .agents import ProteinAgent, ReceptorAgent
from .data import BUNDLED_NAME, bundled_mapk
from .engine import World, inject_ligand, step
from .errors import (
    CellulatError,
    NegativeMagnitude,
    UnknownAgent,
    UnknownSession,
    ValidationFailed,
)
from .kinetics import KineticsParams
from .pathway import parse_pathway, validate

DEFAULT_TRACE_WINDOW = 100
DEFAULT_STREAM_BUFFER = 256

PERTURBATION_KINDS = ("inject-ligand", "knockout-agent", "set-kinetics")


@dataclass
class Perturbation:
    kind: str
    payload: dict


@dataclass
class Subscription:
    id: str
    buffer: deque
    missed_first: int | None = None
    missed_last: int | None = None

    def push(self, delta):
        if len(self.buffer) == self.buffer.maxlen:
            dropped = self.buffer.popleft()
            tick = dropped.get("tick")
            if self.missed_first is None:
                self.missed_first = tick
            self.missed_last = tick
        self.buffer.append(delta)

    def drain(self):
        """Pending messages, preceded by a gap marker if deltas were lost."""
        out = []
        if self.missed_first is not None:
            out.append({
                "gap": True,
                "first_missed_tick": self.missed_first,
                "last_missed_tick": self.missed_last,
            })
            self.missed_first = self.missed_last = None
        while self.buffer:
            out.append(self.buffer.popleft())
        return out


class Session:
    def __init__(self, pathway, trace_window=DEFAULT_TRACE_WINDOW,
                 stream_buffer=DEFAULT_STREAM_BUFFER):
        self.id = uuid.uuid4().hex
        self.pathway = pathway
        self.world = World.from_pathway(pathway)
        self.status = "paused"
        self.lock = threading.Lock()
        self.trace_window = trace_window
        self.stream_buffer = stream_buffer
        self.subscribers = {}
        self.pending_perturbations = []
        self.perturbation_log = []  # (tick_queued, Perturbation)
        self._state_cache = self._observe_agents()

    # -- perturbations -------------------------------------------------------

    def perturb(self, p):
        if p.kind not in PERTURBATION_KINDS:
            raise CellulatError("unknown perturbation kind %r" % p.kind)
        with self.lock:
            self._validate_perturbation(p)
            self.pending_perturbations.append(p)
            self.perturbation_log.append((self.world.tick, p))
        return {"applied_at_tick": self.world.tick + 1}

    def _validate_perturbation(self, p):
        if p.kind == "inject-ligand":
            if float(p.payload.get("magnitude", 0)) < 0:
                raise NegativeMagnitude("dose magnitude must be >= 0")
            self.world.board.level_index(p.payload.get("level", "membrane"))
        elif p.kind == "knockout-agent":
            if p.payload.get("agent") not in self.world.agents:
                raise UnknownAgent(str(p.payload.get("agent")))
        elif p.kind == "set-kinetics":
            try:
                KineticsParams(
                    k_base=float(p.payload.get("k_base", self.world.params.k_base)),
                    k_deact=float(p.payload.get("k_deact", self.world.params.k_deact)),
                )
            except ValueError as exc:
                raise CellulatError(str(exc)) from None

    def _apply_pending(self):
        for p in self.pending_perturbations:
            if p.kind == "inject-ligand":
                inject_ligand(
                    self.world,
                    p.payload["ligand"],
                    float(p.payload["magnitude"]),
                    p.payload.get("level", "membrane"),
                )
            elif p.kind == "knockout-agent":
                if p.payload["agent"] in self.world.agents:
                    self.world.destroy_agent(p.payload["agent"])
            elif p.kind == "set-kinetics":
                self.world.params = KineticsParams(
                    k_base=float(p.payload.get("k_base", self.world.params.k_base)),
                    k_deact=float(p.payload.get("k_deact", self.world.params.k_deact)),
                )
        self.pending_perturbations = []

    # -- time ----------------------------------------------------------------

    def advance(self, n_ticks):
        with self.lock:
            self.status = "running"
            for _ in range(n_ticks):
                self._apply_pending()
                trace_mark = self.world.board.trace_len()
                step(self.world)
                self._publish_delta(trace_mark)
            self.status = "paused"
            return self._snapshot_locked()

    def _observe_agents(self):
        out = {}
        for identity in sorted(self.world.agents):
            agent = self.world.agents[identity]
            if isinstance(agent, ProteinAgent):
                out[identity] = {
                    "kind": "protein", "compartment": agent.compartment,
                    "aac": agent.aac, "iac": agent.iac, "iic": agent.iic,
                }
            elif isinstance(agent, ReceptorAgent):
                out[identity] = {
                    "kind": "receptor", "compartment": agent.compartment,
                    "ss": agent.ss, "ps": agent.ps, "as": agent.as_state,
                    "bound": agent.ligand_bound,
                }
            else:
                out[identity] = {"kind": "ligand", "compartment": agent.compartment}
        return out

    def _publish_delta(self, trace_mark):
        state = self._observe_agents()
        changed = {
            identity: obs for identity, obs in state.items()
            if self._state_cache.get(identity) != obs
        }
        removed = [i for i in self._state_cache if i not in state]
        trace = self.world.board.trace_since(trace_mark)
        delta = {
            "tick": self.world.tick,
            "changed_agents": changed,
            "removed_agents": removed,
            "new_trace": [_trace_json(e) for e in trace],
            "new_signals": [
                {"id": ev.signal.id, "kind": ev.signal.kind, "subject": ev.signal.subject,
                 "level": ev.signal.level, "magnitude": ev.signal.magnitude}
                for ev in self.world.pending_events
            ],
        }
        self._state_cache = state
        for sub in self.subscribers.values():
            sub.push(delta)

    # -- views ---------------------------------------------------------------

    def snapshot(self):
        with self.lock:
            return self._snapshot_locked()

    def _snapshot_locked(self):
        board = self.world.board
        signals = {}
        for lvl in board.levels:
            signals[lvl.name] = [
                {"id": s.id, "kind": s.kind, "subject": s.subject,
                 "magnitude": s.magnitude, "tick": s.tick}
                for s in board.read_level(lvl.name)
            ]
        trace = board.trace_log()[-self.trace_window:]
        return {
            "session": self.id,
            "tick": self.world.tick,
            "status": self.status,
            "levels": [lvl.name for lvl in board.levels],
            "agents": self._observe_agents(),
            "signals": signals,
            "trace": [_trace_json(e) for e in trace],
        }

    def subscribe(self):
        sub = Subscription(uuid.uuid4().hex, deque(maxlen=self.stream_buffer))
        with self.lock:
            self.subscribers[sub.id] = sub
        return sub

    def unsubscribe(self, sub_id):
        with self.lock:
            self.subscribers.pop(sub_id, None)


def _trace_json(entry):
    return {
        "tick": entry.tick,
        "agent": entry.agent,
        "rule": entry.rule,
        "consumed": list(entry.consumed),
        "produced": list(entry.produced),
        "level_span": list(entry.level_span),
        "error": entry.error,
    }


class SessionRegistry:
    def __init__(self):
        self._sessions = {}
        self._lock = threading.Lock()

    def create(self, pathway):
        report = validate(pathway)
        if report.errors:
            raise ValidationFailed(report)
        session = Session(pathway)
        with self._lock:
            self._sessions[session.id] = session
        return session

    def get(self, session_id):
        with self._lock:
            try:
                return self._sessions[session_id]
            except KeyError:
                raise UnknownSession(session_id) from None

    def delete(self, session_id):
        with self._lock:
            if session_id not in self._sessions:
                raise UnknownSession(session_id)
            del self._sessions[session_id]

    def replay(self, session_id):
        """Fresh session re-running the perturbation log; returns its snapshot."""
        source = self.get(session_id)
        fresh = Session(source.pathway)
        for tick_queued, p in source.perturbation_log:
            if fresh.world.tick < tick_queued:
                fresh.advance(tick_queued - fresh.world.tick)
            fresh.perturb(p)
        if fresh.world.tick < source.world.tick:
            fresh.advance(source.world.tick - fresh.world.tick)
        snap = fresh.snapshot()
        snap["session"] = session_id
        return snap


def _error_response(exc):
    status = 400
    if isinstance(exc, (UnknownSession, UnknownAgent)):
        status = 404
    elif isinstance(exc, ValidationFailed):
        status = 422
    return JSONResponse(
        status_code=status,
        content={"code": type(exc).__name__, "message": str(exc)},
    )


def create_app(registry=None):
    registry = registry if registry is not None else SessionRegistry()
    app = FastAPI(title="cellulat virtual laboratory")
    app.state.registry = registry

    @app.exception_handler(CellulatError)
    async def handle_cellulat_error(request: Request, exc: CellulatError):
        return _error_response(exc)

    @app.post("/sessions", status_code=201)
    def create_session(body: dict):
        if body.get("name") == BUNDLED_NAME:
            pathway = bundled_mapk()
        elif "pathway" in body:
            pathway = parse_pathway(json.dumps(body["pathway"]))
        else:
            return JSONResponse(
                status_code=400,
                content={"code": "BadRequest",
                         "message": "body must carry 'pathway' or name 'bundled-mapk'"})
        session = registry.create(pathway)
        return {"id": session.id}

    @app.post("/sessions/{session_id}/advance")
    def advance(session_id: str, body: dict):
        session = registry.get(session_id)
        ticks = int(body.get("ticks", 1))
        if ticks < 0:
            return JSONResponse(
                status_code=400,
                content={"code": "BadRequest", "message": "ticks must be >= 0"})
        return session.advance(ticks)

    @app.post("/sessions/{session_id}/perturb")
    def perturb(session_id: str, body: dict):
        session = registry.get(session_id)
        p = Perturbation(kind=body.get("kind", ""), payload=body.get("payload", {}))
        return session.perturb(p)

    @app.get("/sessions/{session_id}/snapshot")
    def snapshot(session_id: str):
        return registry.get(session_id).snapshot()

    @app.get("/sessions/{session_id}/replay")
    def replay(session_id: str):
        registry.get(session_id)
        return registry.replay(session_id)

    @app.get("/sessions/{session_id}/stream")
    def stream(session_id: str, max_events: int = 0):
        session = registry.get(session_id)
        sub = session.subscribe()

        def event_source():
            import time
            sent = 0
            try:
                idle = 0.0
                while True:
                    messages = sub.drain()
                    if not messages:
                        if max_events and sent >= max_events:
                            break
                        time.sleep(0.02)
                        idle += 0.02
                        if max_events and idle > 5.0:
                            break  # bounded wait when a message budget was set
                        continue
                    idle = 0.0
                    for msg in messages:
                        yield "data: %s\n\n" % json.dumps(msg)
                        sent += 1
                        if max_events and sent >= max_events:
                            return
            finally:
                session.unsubscribe(sub.id)

        return StreamingResponse(event_source(), media_type="text/event-stream")

    @app.delete("/sessions/{session_id}")
    def delete(session_id: str):
        registry.delete(session_id)
        return {"deleted": session_id}

    return app
