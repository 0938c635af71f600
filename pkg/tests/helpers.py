"""Shared test fixtures: random model generators and brute-force oracles.

The oracles deliberately re-derive behaviour from first principles (flat
enumeration, no indexes) so they can disagree with the optimized
implementations if either is wrong.
"""

from __future__ import annotations

import random

from cellulat.agents import (
    DOMAIN_FREE,
    AgentSpec,
    IpvEntry,
    PhosphoSite,
    ProteinAgent,
    ReceptorAgent,
)
from cellulat.pathway import Dose, PathwayDef

LEVELS = ("membrane", "juxtamembrane", "cytoplasm", "nucleus")

_NAMES = ["R1", "R2", "P1", "P2", "P3", "P4", "L1", "L2"]


def _maybe(rng, p=0.5):
    return rng.random() < p


def random_pathway(rng, max_agents=6):
    """A random valid pathway definition with at most `max_agents` agents."""
    n = rng.randint(1, max_agents)
    names = rng.sample(_NAMES, n)
    agents = []
    ligands = [nm for nm in names if nm.startswith("L")]
    proteins = [nm for nm in names if nm.startswith("P")]
    for nm in names:
        if nm.startswith("L"):
            agents.append(AgentSpec(identity=nm, kind="ligand", compartment="membrane"))
        elif nm.startswith("R"):
            lv = [(lig, rng.randint(1, 3)) for lig in ligands if _maybe(rng, 0.8)]
            if not lv:
                # keep the receptor bindable so creation never warns
                lv = [("LX", 1)]
            psv = [PhosphoSite("Y%d" % i, nm, rng.randint(1, 3))
                   for i in range(rng.randint(0, 2))]
            ipv = [IpvEntry(p, "SH2", rng.randint(1, 3))
                   for p in proteins if _maybe(rng, 0.6)]
            agents.append(AgentSpec(
                identity=nm, kind="receptor", compartment="membrane",
                lv=lv, psv=psv, ipv=ipv))
        else:
            iic = round(rng.uniform(1, 50), 3)
            partners = [p for p in proteins if p != nm and _maybe(rng, 0.5)]
            ipv = [IpvEntry(p, rng.choice(["SH2", "dock"]), rng.randint(1, 3),
                            rng.choice(["activate", "activate", "inhibit"]))
                   for p in partners]
            agents.append(AgentSpec(
                identity=nm, kind="protein",
                compartment=rng.choice(["cytoplasm", "nucleus"]),
                role=rng.choice(["adapter", "enzyme"]),
                dv=[("SH2", DOMAIN_FREE), ("dock", DOMAIN_FREE)],
                ipv=ipv, iic=iic, aac=0.0, iac=iic))
    schedule = []
    if ligands and _maybe(rng, 0.7):
        schedule.append(Dose(0, rng.choice(ligands), round(rng.uniform(0.5, 20), 2),
                             "membrane"))
    return PathwayDef(
        name="random-%d" % rng.randint(0, 10 ** 6),
        levels=LEVELS,
        agents=agents,
        ligand_schedule=schedule,
        kinetics={"k_base": round(rng.uniform(0.05, 0.9), 3)},
    )


# ---------------------------------------------------------------------------
# Brute-force rule matching / selection oracle
# ---------------------------------------------------------------------------

def _pattern_matches(pattern, signal):
    return (
        pattern.kind == signal.kind
        and signal.subject in pattern.subjects
        and (pattern.level is None or pattern.level == signal.level)
    )


def _oracle_guard(rule, signal, world):
    """Flat re-derivation of every rule precondition."""
    owner = world.agents.get(rule.owner)
    if owner is None:
        return False
    b = rule.behaviour
    if b == "external-interaction":
        return signal.magnitude > 0 and not owner.ligand_bound
    if b == "phosphorylation":
        entry = owner.site(rule.payload["site"])
        if entry is None or entry.phosphorylated:
            return False
        return owner.ss == 1 if rule.payload["auto"] else True
    if b == "activation":
        return owner.ps == 1 and owner.as_state == 0
    if b == "recruitment":
        target = world.agents.get(rule.payload["target"])
        if owner.as_state != 1 or not isinstance(target, ProteinAgent):
            return False
        via = rule.payload["via"]
        if via not in target.domains:
            return False
        return target.domains[via] == DOMAIN_FREE or target.iac > 0
    if b == "interaction":
        target = world.agents.get(rule.payload["target"])
        if owner.aac <= 0 or not isinstance(target, ProteinAgent):
            return False
        if rule.payload.get("effect") == "inhibit":
            return target.aac > 0
        via = rule.payload["via"]
        if via in target.domains:
            return target.domains[via] == DOMAIN_FREE or target.iac > 0
        if target.site(via) is not None:
            return (not target.site(via).phosphorylated) or target.iac > 0
        return target.iac > 0
    if b == "substrate-phosphorylation":
        site = owner.site(rule.payload["site"])
        return site is not None and ((not site.phosphorylated) or owner.iac > 0)
    if b == "translocation":
        if owner.compartment == rule.payload["destination"]:
            return False
        if isinstance(owner, ReceptorAgent):
            return owner.as_state == 1
        return owner.aac > 0
    if b == "crosstalk":
        if not isinstance(owner, ProteinAgent):
            return False
        if signal.kind == "SignallingMolecule" and signal.magnitude <= 0:
            return False
        return owner.iac > 0
    return False


def _oracle_resource(rule, world):
    b = rule.behaviour
    if b == "external-interaction":
        return ("bind", rule.owner)
    if b in ("recruitment", "interaction"):
        target = world.agents.get(rule.payload["target"])
        via = rule.payload["via"]
        docking = (
            isinstance(target, ProteinAgent)
            and target.domains.get(via) == DOMAIN_FREE
            and rule.payload.get("effect") != "inhibit"
        )
        if docking:
            if b == "recruitment":
                return ("recruit", rule.owner)
            return ("dock", rule.payload["target"], via)
        return ("xfer", rule.owner, rule.payload["target"])
    return ("unique", rule.id)


def oracle_select(events, world):
    """All winning (rule id, signal id) pairs by flat enumeration.

    Considers every registered rule against every event, applies the guard,
    groups by competed resource and keeps the minimum of
    (rank, owner, rule id, signal id) per group; output is ordered by
    (event level index, rank, owner, rule id, signal id).
    """
    matched = []
    for event in events:
        for rule in world.rules.values():
            if rule.owner not in event.candidates:
                continue
            if not _pattern_matches(rule.pattern, event.signal):
                continue
            if _oracle_guard(rule, event.signal, world):
                matched.append((rule, event))
    groups = {}
    for rule, event in matched:
        groups.setdefault(_oracle_resource(rule, world), []).append((rule, event))
    winners = []
    for key in groups:
        winners.append(min(
            groups[key],
            key=lambda pair: (pair[0].rank, pair[0].owner, pair[0].id, pair[1].signal.id)))
    winners.sort(key=lambda pair: (
        world.board.level_index(pair[1].signal.level),
        pair[0].rank, pair[0].owner, pair[0].id, pair[1].signal.id))
    return [(rule.id, event.signal.id) for rule, event in winners]


# ---------------------------------------------------------------------------
# Brute-force agency-column oracle
# ---------------------------------------------------------------------------

def oracle_columns(trace):
    """All maximal causal chains crossing >= 2 levels, by exhaustive search.

    Enumerates every sequence of distinct trace indices whose consecutive
    entries are linked by a produced/consumed signal, then keeps the sequences
    that cannot be extended at either end.  Exponential; for tiny traces only.
    """
    trace = list(trace)
    n = len(trace)
    edge = [[False] * n for _ in range(n)]
    for i, a in enumerate(trace):
        for j, b in enumerate(trace):
            if i != j and set(a.produced) & set(b.consumed):
                edge[i][j] = True

    paths = [[i] for i in range(n)]
    all_paths = []
    while paths:
        path = paths.pop()
        all_paths.append(path)
        for j in range(n):
            if edge[path[-1]][j] and j not in path:
                paths.append(path + [j])

    def extendable(path):
        head, tail = path[0], path[-1]
        if any(edge[i][head] for i in range(n)):
            return True
        if any(edge[tail][j] for j in range(n)):
            return True
        return False

    result = []
    for path in all_paths:
        if extendable(path):
            continue
        levels = set()
        for i in path:
            lo, hi = trace[i].level_span
            levels |= set(range(lo, hi + 1))
        if len(levels) >= 2:
            result.append((tuple(path), frozenset(levels)))
    return sorted(result)


def make_rng(seed):
    return random.Random(seed)
