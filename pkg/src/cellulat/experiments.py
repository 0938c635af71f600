"""Perturbation experiments: knockouts, dosing, curves, maps and exports."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field, replace

import numpy as np

from .agents import KIND_LIGAND, KIND_PROTEIN, KIND_RECEPTOR
from .blackboard import extract_columns
from .engine import World, run
from .errors import AxisMismatch, IoError, UnknownAgent, ValidationFailed
from .kinetics import KineticsParams
from .pathway import Dose, interaction_edges, validate

EXPORT_FORMATS = ("curves-csv", "activity-csv", "trace-jsonl")

CURVES_HEADER = ["tick", "agent", "compartment", "aac_nM", "iac_nM", "ss", "ps", "as", "firings"]


@dataclass
class Experiment:
    pathway: object
    knockouts: list = field(default_factory=list)
    doses: list = field(default_factory=list)  # [Dose]
    n_ticks: int = 200
    kinetics: dict = field(default_factory=dict)  # overrides


class ExperimentResults:
    """All outputs of one deterministic run; columns are computed lazily."""

    def __init__(self, pathway, series, trace, levels):
        self.pathway = pathway
        self.concentration_series = series.concentrations
        self.state_series = series.states
        self.activity_series = series.firings
        self.ticks = list(series.ticks)
        self.trace = trace
        self.levels = tuple(levels)
        self._level_index = {name: i for i, name in enumerate(self.levels)}
        self._compartments = {a.identity: a.compartment for a in pathway.agents}
        self._columns = None

    @property
    def activity_map(self):
        """Firing counts as a (level x tick) matrix."""
        n = len(self.ticks)
        grid = np.zeros((len(self.levels), n), dtype=int)
        t0 = self.ticks[0]
        for entry in self.trace:
            if entry.error is not None:
                continue
            col = entry.tick - t0
            if 0 <= col < n:
                level = self._compartments.get(entry.agent)
                if level in self._level_index:
                    grid[self._level_index[level], col] += 1
        return grid

    @property
    def columns(self):
        if self._columns is None:
            self._columns = extract_columns(self.trace)
        return self._columns

    def ever_active(self):
        """Agents whose AAC exceeded 0 at any recorded tick."""
        return {
            agent
            for agent, conc in self.concentration_series.items()
            if any(v > 0 for v in conc["aac"])
        }


def knockout(pdef, ids):
    """Remove agents before t=0.  Rules referencing them dangle (warnings)."""
    ids = list(ids)
    known = set(pdef.agent_ids())
    for identity in ids:
        if identity not in known:
            raise UnknownAgent(identity)
    removed = set(ids)
    return replace(
        pdef,
        agents=[a for a in pdef.agents if a.identity not in removed],
        sections={
            sec: [m for m in members if m not in removed]
            for sec, members in pdef.sections.items()
        },
        ligand_schedule=list(pdef.ligand_schedule),
        crosstalk_links=list(pdef.crosstalk_links),
        translocations=list(pdef.translocations),
        aliases={k: list(v) for k, v in pdef.aliases.items()},
        kinetics=dict(pdef.kinetics),
    )


def run_experiment(exp):
    pdef = knockout(exp.pathway, exp.knockouts)
    report = validate(pdef)
    if report.errors:
        raise ValidationFailed(report)
    params = None
    if exp.kinetics:
        kin = dict(pdef.kinetics)
        kin.update(exp.kinetics)
        params = KineticsParams(
            k_base=float(kin.get("k_base", 0.1)),
            k_deact=float(kin.get("k_deact", 0.1)),
        )
    world = World.from_pathway(pdef, params=params, check=False)
    doses = list(pdef.ligand_schedule) + list(exp.doses)
    world, series = run(world, exp.n_ticks, doses=doses)
    return ExperimentResults(pdef, series, world.board.trace_log(), pdef.levels)


def reachability_oracle(pdef, knockouts=(), stimulus="EGF"):
    """Agents reachable from the stimulus over activation-capable edges.

    Independent of the simulator: plain breadth-first search over the
    definition's committed interaction graph with knocked-out nodes deleted.
    An agent may show AAC > 0 in a run only if it is in this set.
    """
    removed = set(knockouts)
    present = set(pdef.agent_ids()) - removed
    adjacency = {}
    for edge in interaction_edges(pdef):
        if edge.kind == "inhibit":
            continue  # inhibition never creates activity
        if edge.source in present and edge.target in present:
            adjacency.setdefault(edge.source, set()).add(edge.target)
    if stimulus not in present:
        return set()
    seen = set()
    frontier = [stimulus]
    while frontier:
        node = frontier.pop()
        for nxt in adjacency.get(node, ()):
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    seen.discard(stimulus)
    return seen


@dataclass
class AgentDiff:
    agent: str
    max_aac_delta: float
    first_divergence_tick: int | None


@dataclass
class DiffReport:
    diffs: list = field(default_factory=list)  # AgentDiff, only agents that differ
    silenced: list = field(default_factory=list)  # active in base, never in perturbed

    @property
    def empty(self):
        return not self.diffs and not self.silenced


def compare(base, perturbed):
    """Per-agent divergence between two runs on the same tick axis."""
    if base.ticks != perturbed.ticks:
        raise AxisMismatch(
            "tick axes differ: %d vs %d points" % (len(base.ticks), len(perturbed.ticks)))
    report = DiffReport()
    agents = sorted(set(base.concentration_series) | set(perturbed.concentration_series))
    for agent in agents:
        a = base.concentration_series.get(agent, {}).get("aac", [0.0] * len(base.ticks))
        b = perturbed.concentration_series.get(agent, {}).get("aac", [0.0] * len(base.ticks))
        deltas = [abs(x - y) for x, y in zip(a, b)]
        max_delta = max(deltas) if deltas else 0.0
        if max_delta > 0:
            first = next(i for i, d in enumerate(deltas) if d > 0)
            report.diffs.append(AgentDiff(agent, max_delta, base.ticks[first]))
        if any(v > 0 for v in a) and not any(v > 0 for v in b):
            report.silenced.append(agent)
    return report


def _fmt(value):
    return format(value, ".12g")


def export(results, destination, format):
    """Write one of the documented output files; deterministic byte-for-byte."""
    if format not in EXPORT_FORMATS:
        raise ValueError("unknown export format %r" % format)
    try:
        with open(destination, "w", newline="", encoding="utf-8") as fh:
            if format == "curves-csv":
                _write_curves(results, fh)
            elif format == "activity-csv":
                _write_activity(results, fh)
            else:
                _write_trace(results, fh)
    except OSError as exc:
        raise IoError(str(exc)) from exc
    return destination


def _write_curves(results, fh):
    writer = csv.writer(fh)
    writer.writerow(CURVES_HEADER)
    agents = sorted(a.identity for a in results.pathway.agents)
    kinds = {a.identity: a.kind for a in results.pathway.agents}
    for i, tick in enumerate(results.ticks):
        for agent in agents:
            comp = results._compartments[agent]
            firings = results.activity_series.get(agent, [])
            fired = firings[i] if i < len(firings) else 0
            if kinds[agent] == KIND_PROTEIN:
                conc = results.concentration_series[agent]
                row = [tick, agent, comp, _fmt(conc["aac"][i]), _fmt(conc["iac"][i]),
                       "", "", "", fired]
            elif kinds[agent] == KIND_RECEPTOR:
                st = results.state_series[agent]
                row = [tick, agent, comp, "", "", st["ss"][i], st["ps"][i], st["as"][i], fired]
            else:
                row = [tick, agent, comp, "", "", "", "", "", fired]
            writer.writerow(row)


def _write_activity(results, fh):
    writer = csv.writer(fh)
    writer.writerow(["tick"] + list(results.levels))
    grid = results.activity_map
    for i, tick in enumerate(results.ticks):
        writer.writerow([tick] + [int(grid[j, i]) for j in range(len(results.levels))])


def _write_trace(results, fh):
    for entry in results.trace:
        fh.write(json.dumps({
            "tick": entry.tick,
            "agent": entry.agent,
            "rule": entry.rule,
            "consumed": list(entry.consumed),
            "produced": list(entry.produced),
            "level_span": list(entry.level_span),
            "error": entry.error,
        }) + "\n")
