"""Production-rule compiler, matcher and deterministic action selection.

Each agent's behaviour repertoire is compiled into rules with a signal
pattern, a state guard and an action.  Matching is event-directed: rules are
looked up through the board's (kind, subject) index, guards are evaluated
against the owner's current state, and competing candidates are resolved by
affinity rank with a lexicographic tie-break.  Firings apply sequentially;
a firing whose precondition was consumed earlier in the tick becomes a
flagged no-op instead of aborting the tick.

This module is the cognition seam: alternative condition/action back-ends
would plug in by replacing the compiler while keeping match/select/apply.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .agents import (
    DOMAIN_BOUND,
    DOMAIN_FREE,
    LigandAgent,
    ProteinAgent,
    ReceptorAgent,
)
from .blackboard import SignalKind, TraceEntry
from .kinetics import kinetics_update

UNRANKED = float("inf")


@dataclass(frozen=True)
class SignalPattern:
    kind: str
    subjects: frozenset  # any of these subjects matches
    level: str | None = None  # None matches any level


@dataclass
class Rule:
    id: str
    owner: str
    behaviour: str
    pattern: SignalPattern
    rank: float = UNRANKED
    payload: dict = field(default_factory=dict)


@dataclass
class Candidate:
    rule: Rule
    event: object
    competition_key: tuple  # (resource, rank, owner)
    level_index: int = 0  # of the triggering signal; fixes the firing order


# ---------------------------------------------------------------------------
# Compilation
# ---------------------------------------------------------------------------

def _expand_kinase(kinase, present, aliases):
    """Resolve a PSV kinase reference to the set of instantiated kinase ids."""
    if kinase in present:
        return frozenset([kinase])
    expansion = aliases.get(kinase)
    if expansion:
        resolved = frozenset(k for k in expansion if k in present)
        return resolved or None
    return None


def compile_receptor_rules(agent, present, aliases):
    """One rule per LV / PSV / IPV entry plus the activation rule.

    Entries whose partner is not instantiated (knocked out or dangling) are
    skipped, so knockouts prune behaviour automatically.
    """
    rules = []
    rid = agent.identity
    for ligand, rank in agent.lv:
        if ligand not in present:
            continue
        rules.append(Rule(
            id="%s/lv/%s" % (rid, ligand),
            owner=rid,
            behaviour="external-interaction",
            pattern=SignalPattern(SignalKind.MOLECULE, frozenset([ligand]), agent.compartment),
            rank=rank,
            payload={"ligand": ligand},
        ))
    for entry in agent.psv:
        if entry.kinase == rid:
            # autophosphorylation: triggered by the dimerization signal
            rules.append(Rule(
                id="%s/psv/%s" % (rid, entry.site),
                owner=rid,
                behaviour="phosphorylation",
                pattern=SignalPattern(
                    SignalKind.ACTIVATION, frozenset(["%s.SS" % rid]), agent.compartment),
                rank=entry.rank,
                payload={"site": entry.site, "auto": True},
            ))
        else:
            kinases = _expand_kinase(entry.kinase, present, aliases)
            if kinases is None:
                continue
            rules.append(Rule(
                id="%s/psv/%s" % (rid, entry.site),
                owner=rid,
                behaviour="phosphorylation",
                pattern=SignalPattern(SignalKind.ACTIVATION, kinases, None),
                rank=entry.rank,
                payload={"site": entry.site, "auto": False},
            ))
    for entry in agent.ipv:
        if entry.target not in present:
            continue
        rules.append(Rule(
            id="%s/ipv/%s" % (rid, entry.target),
            owner=rid,
            behaviour="recruitment",
            pattern=SignalPattern(SignalKind.ACTIVATION, frozenset([rid]), None),
            rank=entry.rank,
            payload={"target": entry.target, "via": entry.via, "effect": entry.effect},
        ))
    rules.append(Rule(
        id="%s/activate" % rid,
        owner=rid,
        behaviour="activation",
        pattern=SignalPattern(
            SignalKind.ACTIVATION, frozenset(["%s.PS" % rid]), agent.compartment),
    ))
    return rules


def compile_protein_rules(agent, present, aliases):
    rules = []
    rid = agent.identity
    for entry in agent.ipv:
        if entry.target not in present:
            continue
        rules.append(Rule(
            id="%s/ipv/%s" % (rid, entry.target),
            owner=rid,
            behaviour="interaction",
            pattern=SignalPattern(SignalKind.ACTIVATION, frozenset([rid]), None),
            rank=entry.rank,
            payload={"target": entry.target, "via": entry.via, "effect": entry.effect},
        ))
    for entry in agent.psv:
        kinases = _expand_kinase(entry.kinase, present, aliases)
        if kinases is None:
            continue
        rules.append(Rule(
            id="%s/psv/%s" % (rid, entry.site),
            owner=rid,
            behaviour="substrate-phosphorylation",
            pattern=SignalPattern(SignalKind.ACTIVATION, kinases, None),
            rank=entry.rank,
            payload={"site": entry.site},
        ))
    return rules


def compile_agent_rules(agent, present, aliases=None):
    aliases = aliases or {}
    if isinstance(agent, ReceptorAgent):
        return compile_receptor_rules(agent, present, aliases)
    if isinstance(agent, ProteinAgent):
        return compile_protein_rules(agent, present, aliases)
    return []  # ligands have no behaviour


def compile_translocation_rule(agent_id, trigger, destination):
    return Rule(
        id="%s/translocate/%s" % (agent_id, destination),
        owner=agent_id,
        behaviour="translocation",
        pattern=SignalPattern(SignalKind.ACTIVATION, frozenset([agent_id]), None),
        payload={"trigger": trigger, "destination": destination},
    )


def compile_crosstalk_rule(source, target, kind):
    signal_kind = SignalKind.MOLECULE if kind == "second-messenger-input" else SignalKind.ACTIVATION
    return Rule(
        id="%s/crosstalk/%s" % (target, source),
        owner=target,
        behaviour="crosstalk",
        pattern=SignalPattern(signal_kind, frozenset([source]), None),
        rank=1,
        payload={"source": source, "kind": kind},
    )


# ---------------------------------------------------------------------------
# Guards
# ---------------------------------------------------------------------------

def guard_holds(rule, signal, world):
    """Is the rule's state precondition satisfied right now?"""
    owner = world.agents.get(rule.owner)
    if owner is None:
        return False
    b = rule.behaviour
    if b == "external-interaction":
        return (not owner.ligand_bound) and signal.magnitude > 0
    if b == "phosphorylation":
        entry = owner.site(rule.payload["site"])
        if entry is None or entry.phosphorylated:
            return False
        if rule.payload["auto"]:
            return owner.ss == 1
        return True
    if b == "activation":
        return owner.ps == 1 and owner.as_state == 0
    if b == "recruitment":
        if owner.as_state != 1:
            return False
        target = world.agents.get(rule.payload["target"])
        if not isinstance(target, ProteinAgent):
            return False
        via = rule.payload["via"]
        if via not in target.domains:
            return False
        return target.domains[via] == DOMAIN_FREE or target.iac > 0
    if b == "interaction":
        if owner.aac <= 0:
            return False
        target = world.agents.get(rule.payload["target"])
        if not isinstance(target, ProteinAgent):
            return False
        via = rule.payload["via"]
        if rule.payload.get("effect") == "inhibit":
            return target.aac > 0
        if via in target.domains:
            return target.domains[via] == DOMAIN_FREE or target.iac > 0
        site = target.site(via)
        if site is not None:
            return (not site.phosphorylated) or target.iac > 0
        return target.iac > 0
    if b == "substrate-phosphorylation":
        site = owner.site(rule.payload["site"])
        if site is None:
            return False
        return (not site.phosphorylated) or owner.iac > 0
    if b == "translocation":
        dest = rule.payload["destination"]
        if owner.compartment == dest:
            return False
        if isinstance(owner, ReceptorAgent):
            return owner.as_state == 1
        return owner.aac > 0
    if b == "crosstalk":
        if not isinstance(owner, ProteinAgent):
            return False
        if signal.kind == SignalKind.MOLECULE and signal.magnitude <= 0:
            return False
        return owner.iac > 0
    return False


def _resource(rule, world):
    """Competition resource this candidate contends for.

    Docking candidates compete per receptor (recruitment) or per target
    domain (protein-protein); sustained transfers and state changes use a
    unique key so they never compete.
    """
    b = rule.behaviour
    if b == "external-interaction":
        return "bind:%s" % rule.owner
    if b == "recruitment":
        target = world.agents.get(rule.payload["target"])
        via = rule.payload["via"]
        if isinstance(target, ProteinAgent) and target.domains.get(via) == DOMAIN_FREE:
            return "recruit:%s" % rule.owner
        return "xfer:%s:%s" % (rule.owner, rule.payload["target"])
    if b == "interaction":
        target = world.agents.get(rule.payload["target"])
        via = rule.payload["via"]
        if (
            rule.payload.get("effect") != "inhibit"
            and isinstance(target, ProteinAgent)
            and target.domains.get(via) == DOMAIN_FREE
        ):
            return "dock:%s:%s" % (rule.payload["target"], via)
        return "xfer:%s:%s" % (rule.owner, rule.payload["target"])
    return "rule:%s" % rule.id


# ---------------------------------------------------------------------------
# Match / select / apply
# ---------------------------------------------------------------------------

def match(events, world):
    """Every (rule, event) pair whose condition holds for the owner's state."""
    candidates = []
    for event in events:
        rules = event.rules if event.rules else world.board.rules_for(event.signal)
        level_index = world.board.level_index(event.signal.level)
        for rule in rules:
            # the cached rule set may be stale after a knockout
            if rule.id not in world.rules or rule.owner not in event.candidates:
                continue
            if guard_holds(rule, event.signal, world):
                candidates.append(Candidate(
                    rule=rule,
                    event=event,
                    competition_key=(_resource(rule, world), rule.rank, rule.owner),
                    level_index=level_index,
                ))
    return candidates


def select_actions(candidates):
    """Winner-take-all per competed resource, then a deterministic global order.

    Within a resource group the lowest rank fires; ties break lexicographically
    by owner identity, then rule id.  The global firing order is (event level
    index, rank, owner, rule id).
    """
    groups = {}
    for cand in candidates:
        groups.setdefault(cand.competition_key[0], []).append(cand)
    winners = []
    for resource in groups:
        winners.append(min(
            groups[resource],
            key=lambda c: (c.rule.rank, c.rule.owner, c.rule.id, c.event.signal.id),
        ))
    return sorted(
        winners,
        key=lambda c: (c.level_index, c.rule.rank, c.rule.owner, c.rule.id, c.event.signal.id),
    )


def apply(firings, board, world):
    """Execute firings sequentially; one trace entry per firing.

    Firings whose guard was invalidated earlier in the tick become no-op
    entries flagged with an error.  Returns (trace entries, new events).
    """
    entries = []
    new_events = []
    for cand in firings:
        rule, signal = cand.rule, cand.event.signal
        if not guard_holds(rule, signal, world):
            entry = TraceEntry(
                tick=world.tick,
                agent=rule.owner,
                rule=rule.id,
                consumed=(signal.id,),
                produced=(),
                level_span=_span(board, signal, rule.owner, world, ()),
                error="invalidated",
            )
            board.record(entry)
            entries.append(entry)
            continue
        produced = _execute(cand, board, world)
        for sig in produced:
            new_events.append(board.post(sig))
            world.emitted_this_tick.add(sig.subject)
        entry = TraceEntry(
            tick=world.tick,
            agent=rule.owner,
            rule=rule.id,
            consumed=(signal.id,),
            produced=tuple(s.id for s in produced),
            level_span=_span(board, signal, rule.owner, world, produced),
        )
        board.record(entry)
        entries.append(entry)
    return entries, new_events


def _span(board, signal, owner_id, world, produced):
    levels = [board.level_index(signal.level)]
    owner = world.agents.get(owner_id)
    if owner is not None and not isinstance(owner, LigandAgent):
        levels.append(board.level_index(owner.compartment))
    for sig in produced:
        levels.append(board.level_index(sig.level))
    return (min(levels), max(levels))


def _activity_signal(board, agent, world):
    level = agent.compartment
    if isinstance(agent, ReceptorAgent):
        level = board.level_after(agent.compartment)
    return board.new_signal(
        SignalKind.ACTIVATION, agent.identity, level, agent.identity, 1.0, world.tick)


def _execute(cand, board, world):
    """Mutate the world per the rule's behaviour; return produced signals."""
    rule, signal = cand.rule, cand.event.signal
    owner = world.agents[rule.owner]
    b = rule.behaviour
    produced = []

    if b == "external-interaction":
        owner.ligand_bound = True
        owner.ss = 1  # aggregate receptor pairs with itself once ligand-bound
        produced.append(board.new_signal(
            SignalKind.ACTIVATION, owner.identity, owner.compartment,
            "%s.SS" % owner.identity, 1.0, world.tick))

    elif b == "phosphorylation":
        entry = owner.site(rule.payload["site"])
        entry.phosphorylated = True
        if entry.kinase == owner.identity and owner.ps == 0:
            owner.ps = 1
            produced.append(board.new_signal(
                SignalKind.ACTIVATION, owner.identity, owner.compartment,
                "%s.PS" % owner.identity, 1.0, world.tick))

    elif b == "activation":
        owner.as_state = 1
        produced.append(_activity_signal(board, owner, world))

    elif b == "recruitment":
        target = world.agents[rule.payload["target"]]
        via = rule.payload["via"]
        if target.domains.get(via) == DOMAIN_FREE:
            target.domains[via] = DOMAIN_BOUND
        delta = kinetics_update(owner, target, rule.rank, world.params)
        if delta > 0 and target.aac > 0:
            produced.append(_activity_signal(board, target, world))

    elif b == "interaction":
        target = world.agents[rule.payload["target"]]
        via = rule.payload["via"]
        if rule.payload.get("effect") == "inhibit":
            delta = kinetics_update(owner, target, rule.rank, world.params, inhibit=True)
            if delta > 0:
                produced.append(board.new_signal(
                    SignalKind.INACTIVATION, owner.identity, target.compartment,
                    target.identity, 1.0, world.tick))
        else:
            if via in target.domains:
                if target.domains[via] == DOMAIN_FREE:
                    target.domains[via] = DOMAIN_BOUND
            else:
                site = target.site(via)
                if site is not None:
                    site.phosphorylated = True
                target.ps = 1
            delta = kinetics_update(owner, target, rule.rank, world.params)
            if delta > 0 and target.aac > 0:
                produced.append(_activity_signal(board, target, world))

    elif b == "substrate-phosphorylation":
        site = owner.site(rule.payload["site"])
        site.phosphorylated = True
        owner.ps = 1
        kinase = world.agents.get(signal.subject)
        delta = kinetics_update(kinase, owner, rule.rank, world.params)
        if delta > 0 and owner.aac > 0:
            produced.append(_activity_signal(board, owner, world))

    elif b == "translocation":
        owner.compartment = rule.payload["destination"]

    elif b == "crosstalk":
        source = world.agents.get(rule.payload["source"])
        delta = kinetics_update(source, owner, rule.rank, world.params)
        if delta > 0 and owner.aac > 0:
            produced.append(_activity_signal(board, owner, world))

    return produced


def dump_rules(rules):
    """Human-readable rule listing, one line per rule."""
    lines = []
    for rule in sorted(rules, key=lambda r: (r.owner, r.id)):
        subjects = "|".join(sorted(rule.pattern.subjects))
        level = rule.pattern.level or "*"
        rank = "-" if rule.rank == UNRANKED else str(rule.rank)
        lines.append("%-28s %-24s on (%s, %s) @ %-14s rank %s" % (
            rule.id, rule.behaviour, rule.pattern.kind, subjects, level, rank))
    return "\n".join(lines)
