"""Synchronous discrete-time simulation kernel.

One step: pending events -> match -> select -> apply -> purge processed state
signals -> re-assert activity of active sources.  Signals created at tick t
trigger matching at t+1.  The engine is fully deterministic: no randomness,
explicit ordering everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .agents import (
    KIND_LIGAND,
    KIND_PROTEIN,
    KIND_RECEPTOR,
    LigandAgent,
    ProteinAgent,
    ReceptorAgent,
    create_protein,
    create_receptor,
)
from .blackboard import Blackboard, SignalKind
from .errors import NegativeMagnitude, UnknownIdentity, ValidationFailed
from .kinetics import KineticsParams
from .rules import (
    apply as apply_firings,
    compile_agent_rules,
    compile_crosstalk_rule,
    compile_translocation_rule,
    match,
    select_actions,
)
from .pathway import validate


@dataclass
class TimeSeries:
    """Per-tick observables recorded by run(); the axis is 0..n_ticks."""

    ticks: list = field(default_factory=list)
    concentrations: dict = field(default_factory=dict)  # id -> {"aac": [...], "iac": [...]}
    states: dict = field(default_factory=dict)  # id -> {"ss"/"ps"/"as"/"bound": [...]}
    firings: dict = field(default_factory=dict)  # id -> [count per tick]


class World:
    """The simulation world: board, agents, compiled rules and pending events."""

    def __init__(self, board=None, params=None, pathway=None):
        self.board = board if board is not None else Blackboard()
        self.agents = {}
        self.rules = {}
        self.tick = 0
        self.pending_events = []
        self.params = params if params is not None else KineticsParams()
        self.pathway = pathway
        self.aliases = dict(pathway.aliases) if pathway is not None else {}
        self.emitted_this_tick = set()

    # -- construction --------------------------------------------------------

    @classmethod
    def from_pathway(cls, pdef, params=None, check=True):
        if check:
            report = validate(pdef)
            if report.errors:
                raise ValidationFailed(report)
        if params is None:
            kin = dict(pdef.kinetics)
            params = KineticsParams(
                k_base=float(kin.get("k_base", 0.1)),
                k_deact=float(kin.get("k_deact", 0.1)),
            )
        world = cls(board=Blackboard(pdef.levels), params=params, pathway=pdef)
        for spec in pdef.agents:
            if spec.kind == KIND_RECEPTOR:
                create_receptor(spec, world.agents)
            elif spec.kind == KIND_PROTEIN:
                create_protein(spec, world.agents)
            else:
                world.agents[spec.identity] = LigandAgent(spec.identity, spec.compartment)
        present = set(world.agents)
        for identity in world.agents:
            for rule in compile_agent_rules(world.agents[identity], present, pdef.aliases):
                world.add_rule(rule)
        for t in pdef.translocations:
            if t.agent in present:
                world.add_rule(compile_translocation_rule(t.agent, t.trigger, t.destination))
        for link in pdef.crosstalk_links:
            if link.target in present:
                world.add_rule(compile_crosstalk_rule(link.source, link.target, link.kind))
        return world

    def add_rule(self, rule):
        self.rules[rule.id] = rule
        self.board.register_rule(rule)

    def destroy_agent(self, identity):
        """Remove the agent, its rules and its pending candidate events."""
        if identity not in self.agents:
            raise UnknownIdentity(identity)
        del self.agents[identity]
        self.rules = {rid: r for rid, r in self.rules.items() if r.owner != identity}
        self.board.unregister_owner(identity)
        self.pending_events = [
            ev for ev in self.pending_events
            if ev.signal.producer != identity or ev.signal.kind == SignalKind.MOLECULE
        ]

    # -- introspection -------------------------------------------------------

    def receptors(self):
        return {k: v for k, v in self.agents.items() if isinstance(v, ReceptorAgent)}

    def proteins(self):
        return {k: v for k, v in self.agents.items() if isinstance(v, ProteinAgent)}


def inject_ligand(world, ligand, magnitude, level):
    """Post a signalling-molecule signal from the external medium."""
    if magnitude < 0:
        raise NegativeMagnitude("ligand magnitude must be >= 0, got %r" % magnitude)
    sig = world.board.new_signal(
        SignalKind.MOLECULE, "EXTERNAL", level, ligand, magnitude, world.tick)
    event = world.board.post(sig)
    world.pending_events.append(event)
    return world


def step(world):
    """Advance the world by exactly one tick."""
    world.tick += 1
    world.emitted_this_tick = set()
    events = world.pending_events
    candidates = match(events, world)
    firings = select_actions(candidates)
    _entries, new_events = apply_firings(firings, world.board, world)
    world.board.purge_transient(world.tick)

    # active sources re-assert their activity so downstream transfers are
    # sustained tick over tick; skipped when a firing already refreshed it
    for identity in sorted(world.agents):
        agent = world.agents[identity]
        if identity in world.emitted_this_tick:
            continue
        active = (
            isinstance(agent, ReceptorAgent) and agent.as_state == 1
        ) or (
            isinstance(agent, ProteinAgent) and agent.aac > 0
        )
        if not active:
            continue
        level = agent.compartment
        if isinstance(agent, ReceptorAgent):
            level = world.board.level_after(agent.compartment)
        sig = world.board.new_signal(
            SignalKind.ACTIVATION, identity, level, identity, 1.0, world.tick)
        new_events.append(world.board.post(sig))

    world.pending_events = new_events
    return world


def _record(world, series, n_firings_before):
    counts = {}
    for entry in world.board.trace_since(n_firings_before):
        if entry.error is None:
            counts[entry.agent] = counts.get(entry.agent, 0) + 1
    series.ticks.append(world.tick)
    for identity in sorted(world.agents):
        agent = world.agents[identity]
        series.firings.setdefault(identity, []).append(counts.get(identity, 0))
        if isinstance(agent, ProteinAgent):
            conc = series.concentrations.setdefault(identity, {"aac": [], "iac": []})
            conc["aac"].append(agent.aac)
            conc["iac"].append(agent.iac)
        elif isinstance(agent, ReceptorAgent):
            st = series.states.setdefault(
                identity, {"ss": [], "ps": [], "as": [], "bound": []})
            st["ss"].append(agent.ss)
            st["ps"].append(agent.ps)
            st["as"].append(agent.as_state)
            st["bound"].append(1 if agent.ligand_bound else 0)


def run(world, n_ticks, doses=()):
    """Apply step() n_ticks times, dosing ligands at their scheduled ticks.

    Records per-tick concentrations, receptor states and firing counts,
    including the initial state at the current tick.
    """
    if n_ticks < 0:
        raise ValueError("n_ticks must be >= 0")
    doses = sorted(doses, key=lambda d: (d.tick, d.ligand))
    series = TimeSeries()
    _record(world, series, world.board.trace_len())
    for _ in range(n_ticks):
        for dose in doses:
            if dose.tick == world.tick:
                inject_ligand(world, dose.ligand, dose.magnitude, dose.level)
        mark = world.board.trace_len()
        step(world)
        _record(world, series, mark)
    return world, series
