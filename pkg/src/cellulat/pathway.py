"""Declarative pathway files: parsing, validation, assembly and crosstalk.

The on-disk format is strict UTF-8 JSON.  Top-level keys::

    name, levels, aliases, agents, ligand_schedule, sections,
    crosstalk_links, translocations, kinetics

Unknown keys anywhere are schema errors with a path-style location.  Dangling
IPV/PSV references are validation *warnings*, because pathway sections are
built and tested incrementally before assembly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .agents import (
    CONSERVATION_TOL,
    KIND_LIGAND,
    KIND_PROTEIN,
    KIND_RECEPTOR,
    AgentSpec,
    IpvEntry,
    PhosphoSite,
    ROLE_TAGS,
)
from .blackboard import DEFAULT_LEVELS
from .errors import (
    DuplicateAcrossSections,
    InvalidLinkKind,
    LevelMismatch,
    PathwaySyntaxError,
    SchemaError,
    UnknownEndpoint,
)

LINK_KINDS = ("second-messenger-input", "enzyme-substrate")

AGENT_KINDS = (KIND_RECEPTOR, KIND_PROTEIN, KIND_LIGAND)


@dataclass
class Dose:
    tick: int
    ligand: str
    magnitude: float
    level: str = "membrane"


@dataclass
class CrosstalkLink:
    source: str
    target: str
    kind: str


@dataclass
class Translocation:
    agent: str
    trigger: str
    destination: str


@dataclass
class PathwayDef:
    name: str = ""
    levels: tuple = DEFAULT_LEVELS
    aliases: dict = field(default_factory=dict)
    agents: list = field(default_factory=list)
    ligand_schedule: list = field(default_factory=list)
    sections: dict = field(default_factory=dict)
    crosstalk_links: list = field(default_factory=list)
    translocations: list = field(default_factory=list)
    kinetics: dict = field(default_factory=dict)

    def agent_ids(self):
        return [a.identity for a in self.agents]

    def agent(self, identity):
        for a in self.agents:
            if a.identity == identity:
                return a
        return None


@dataclass
class ValidationReport:
    errors: list = field(default_factory=list)  # (code, location, message)
    warnings: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.errors


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def _require(mapping, key, loc):
    if key not in mapping:
        raise SchemaError("missing required %r" % key, location=loc)
    return mapping[key]


def _check_keys(mapping, allowed, loc):
    unknown = set(mapping) - set(allowed)
    if unknown:
        raise SchemaError(
            "unknown field(s) %s" % ", ".join(sorted(unknown)), location=loc)


def _typed(value, types, loc, what):
    if not isinstance(value, types):
        raise SchemaError("%s has wrong type %s" % (what, type(value).__name__), location=loc)
    return value


def _parse_agent(obj, loc):
    _typed(obj, dict, loc, "agent")
    _check_keys(obj, (
        "id", "kind", "compartment", "role", "lv", "psv", "ipv", "dv",
        "iic", "aac", "iac", "provenance",
    ), loc)
    identity = _typed(_require(obj, "id", loc), str, loc + ".id", "id")
    kind = _typed(_require(obj, "kind", loc), str, loc + ".kind", "kind")
    if kind not in AGENT_KINDS:
        raise SchemaError("unknown agent kind %r" % kind, location=loc + ".kind")
    compartment = _typed(_require(obj, "compartment", loc), str, loc + ".compartment", "compartment")
    role = obj.get("role")
    if role is not None and role not in ROLE_TAGS:
        raise SchemaError("unknown role tag %r" % role, location=loc + ".role")

    lv = []
    for i, entry in enumerate(obj.get("lv", [])):
        eloc = "%s.lv[%d]" % (loc, i)
        _check_keys(_typed(entry, dict, eloc, "lv entry"), ("ligand", "rank"), eloc)
        lv.append((_require(entry, "ligand", eloc), int(_require(entry, "rank", eloc))))
    psv = []
    for i, entry in enumerate(obj.get("psv", [])):
        eloc = "%s.psv[%d]" % (loc, i)
        _check_keys(_typed(entry, dict, eloc, "psv entry"), ("site", "kinase", "rank"), eloc)
        psv.append(PhosphoSite(
            _require(entry, "site", eloc),
            _require(entry, "kinase", eloc),
            int(_require(entry, "rank", eloc)),
        ))
    ipv = []
    for i, entry in enumerate(obj.get("ipv", [])):
        eloc = "%s.ipv[%d]" % (loc, i)
        _check_keys(_typed(entry, dict, eloc, "ipv entry"),
                    ("target", "via", "rank", "effect"), eloc)
        effect = entry.get("effect", "activate")
        if effect not in ("activate", "inhibit"):
            raise SchemaError("unknown effect %r" % effect, location=eloc + ".effect")
        ipv.append(IpvEntry(
            _require(entry, "target", eloc),
            _require(entry, "via", eloc),
            int(_require(entry, "rank", eloc)),
            effect,
        ))
    dv = []
    for i, entry in enumerate(obj.get("dv", [])):
        eloc = "%s.dv[%d]" % (loc, i)
        _check_keys(_typed(entry, dict, eloc, "dv entry"), ("domain", "state"), eloc)
        dv.append((_require(entry, "domain", eloc), _require(entry, "state", eloc)))

    if kind == KIND_PROTEIN:
        iic = float(_require(obj, "iic", loc))
        aac = float(_require(obj, "aac", loc))
        iac = float(_require(obj, "iac", loc))
    else:
        for key in ("iic", "aac", "iac"):
            if key in obj:
                raise SchemaError(
                    "%s agents carry no concentrations" % kind, location=loc + "." + key)
        iic = aac = iac = 0.0

    return AgentSpec(
        identity=identity, kind=kind, compartment=compartment, role=role,
        lv=lv, psv=psv, ipv=ipv, dv=dv, iic=iic, aac=aac, iac=iac,
        provenance=obj.get("provenance"),
    )


def parse_pathway(text):
    """Parse a pathway document in strict mode.

    Raises PathwaySyntaxError (with position) for malformed JSON and
    SchemaError (with a field location) for schema violations.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PathwaySyntaxError(
            "invalid pathway document: %s" % exc.msg,
            line=exc.lineno, column=exc.colno, pos=exc.pos) from None
    if not isinstance(doc, dict):
        raise SchemaError("pathway document must be a JSON object", location="$")
    _check_keys(doc, (
        "name", "levels", "aliases", "agents", "ligand_schedule", "sections",
        "crosstalk_links", "translocations", "kinetics",
    ), "$")
    agents_raw = _require(doc, "agents", "$")
    _typed(agents_raw, list, "$.agents", "agents")

    agents = []
    seen = {}
    for i, obj in enumerate(agents_raw):
        loc = "$.agents[%d]" % i
        spec = _parse_agent(obj, loc)
        if spec.identity in seen:
            raise SchemaError(
                "duplicate agent id %r (first at $.agents[%d], again at %s)"
                % (spec.identity, seen[spec.identity], loc),
                location=loc)
        seen[spec.identity] = i
        agents.append(spec)

    levels = tuple(_typed(doc.get("levels", list(DEFAULT_LEVELS)), list, "$.levels", "levels"))
    aliases = {
        k: list(v)
        for k, v in _typed(doc.get("aliases", {}), dict, "$.aliases", "aliases").items()
    }

    schedule = []
    for i, entry in enumerate(doc.get("ligand_schedule", [])):
        loc = "$.ligand_schedule[%d]" % i
        _check_keys(_typed(entry, dict, loc, "dose"), ("tick", "ligand", "magnitude", "level"), loc)
        schedule.append(Dose(
            int(_require(entry, "tick", loc)),
            _require(entry, "ligand", loc),
            float(_require(entry, "magnitude", loc)),
            _require(entry, "level", loc),
        ))

    sections = {}
    for sec, members in _typed(doc.get("sections", {}), dict, "$.sections", "sections").items():
        sections[sec] = list(_typed(members, list, "$.sections.%s" % sec, "section members"))

    links = []
    for i, entry in enumerate(doc.get("crosstalk_links", [])):
        loc = "$.crosstalk_links[%d]" % i
        _check_keys(_typed(entry, dict, loc, "link"), ("source", "target", "kind"), loc)
        kind = _require(entry, "kind", loc)
        if kind not in LINK_KINDS:
            raise SchemaError("unknown link kind %r" % kind, location=loc + ".kind")
        links.append(CrosstalkLink(
            _require(entry, "source", loc), _require(entry, "target", loc), kind))

    translocations = []
    for i, entry in enumerate(doc.get("translocations", [])):
        loc = "$.translocations[%d]" % i
        _check_keys(_typed(entry, dict, loc, "translocation"),
                    ("agent", "trigger", "destination"), loc)
        translocations.append(Translocation(
            _require(entry, "agent", loc),
            _require(entry, "trigger", loc),
            _require(entry, "destination", loc),
        ))

    kinetics = _typed(doc.get("kinetics", {}), dict, "$.kinetics", "kinetics")
    _check_keys(kinetics, ("k_base", "k_deact"), "$.kinetics")

    return PathwayDef(
        name=doc.get("name", ""),
        levels=levels,
        aliases=aliases,
        agents=agents,
        ligand_schedule=schedule,
        sections=sections,
        crosstalk_links=links,
        translocations=translocations,
        kinetics=dict(kinetics),
    )


def _agent_to_json(spec):
    obj = {"id": spec.identity, "kind": spec.kind, "compartment": spec.compartment}
    if spec.role is not None:
        obj["role"] = spec.role
    if spec.lv:
        obj["lv"] = [{"ligand": lig, "rank": rank} for lig, rank in spec.lv]
    if spec.psv:
        obj["psv"] = [{"site": e.site, "kinase": e.kinase, "rank": e.rank} for e in spec.psv]
    if spec.ipv:
        obj["ipv"] = [
            {"target": e.target, "via": e.via, "rank": e.rank,
             **({"effect": e.effect} if e.effect != "activate" else {})}
            for e in spec.ipv
        ]
    if spec.dv:
        obj["dv"] = [{"domain": d, "state": s} for d, s in spec.dv]
    if spec.kind == KIND_PROTEIN:
        obj["iic"] = spec.iic
        obj["aac"] = spec.aac
        obj["iac"] = spec.iac
    if spec.provenance is not None:
        obj["provenance"] = spec.provenance
    return obj


def serialize_pathway(pdef):
    """Canonical serialization; parse(serialize(d)) == d for every valid d."""
    doc = {
        "name": pdef.name,
        "levels": list(pdef.levels),
        "agents": [_agent_to_json(a) for a in pdef.agents],
    }
    if pdef.aliases:
        doc["aliases"] = {k: list(v) for k, v in pdef.aliases.items()}
    if pdef.ligand_schedule:
        doc["ligand_schedule"] = [
            {"tick": d.tick, "ligand": d.ligand, "magnitude": d.magnitude, "level": d.level}
            for d in pdef.ligand_schedule
        ]
    if pdef.sections:
        doc["sections"] = {k: list(v) for k, v in pdef.sections.items()}
    if pdef.crosstalk_links:
        doc["crosstalk_links"] = [
            {"source": l.source, "target": l.target, "kind": l.kind}
            for l in pdef.crosstalk_links
        ]
    if pdef.translocations:
        doc["translocations"] = [
            {"agent": t.agent, "trigger": t.trigger, "destination": t.destination}
            for t in pdef.translocations
        ]
    if pdef.kinetics:
        doc["kinetics"] = dict(pdef.kinetics)
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def validate(pdef):
    """Referential and conservation checks.  Dangling references are warnings."""
    report = ValidationReport()
    err, warn = report.errors.append, report.warnings.append
    ids = set()
    levels = set(pdef.levels)

    for i, spec in enumerate(pdef.agents):
        loc = "agents[%d]" % i
        if spec.identity in ids:
            err(("DUPLICATE", loc, "duplicate agent id %r" % spec.identity))
        ids.add(spec.identity)
        if spec.compartment not in levels:
            err(("LEVEL", loc, "%s: unknown compartment %r" % (spec.identity, spec.compartment)))
        if spec.kind == KIND_PROTEIN:
            if spec.iic < 0 or spec.aac < 0 or spec.iac < 0:
                err(("NEGATIVE", loc, "%s: negative concentration" % spec.identity))
            if abs(spec.aac + spec.iac - spec.iic) > CONSERVATION_TOL:
                err(("CONSERVATION", loc,
                     "%s: AAC + IAC != IIC (%g + %g != %g)"
                     % (spec.identity, spec.aac, spec.iac, spec.iic)))
        for lig, rank in spec.lv:
            if rank < 1:
                err(("RANK", loc, "%s: LV rank < 1 for %s" % (spec.identity, lig)))
        for e in spec.psv:
            if e.rank < 1:
                err(("RANK", loc, "%s: PSV rank < 1 for %s" % (spec.identity, e.site)))
        for e in spec.ipv:
            if e.rank < 1:
                err(("RANK", loc, "%s: IPV rank < 1 for %s" % (spec.identity, e.target)))

    alias_names = set(pdef.aliases)
    for i, spec in enumerate(pdef.agents):
        loc = "agents[%d]" % i
        for lig, _ in spec.lv:
            if lig not in ids:
                warn(("DANGLING", loc, "%s: LV ligand %r not defined" % (spec.identity, lig)))
        for e in spec.psv:
            if e.kinase != spec.identity and e.kinase not in ids and e.kinase not in alias_names:
                warn(("DANGLING", loc,
                      "%s: PSV kinase %r not defined" % (spec.identity, e.kinase)))
        for e in spec.ipv:
            if e.target not in ids:
                warn(("DANGLING", loc,
                      "%s: IPV target %r not defined" % (spec.identity, e.target)))
    for alias, members in pdef.aliases.items():
        for m in members:
            if m not in ids:
                warn(("DANGLING", "aliases.%s" % alias, "alias member %r not defined" % m))

    claimed = {}
    for sec, members in pdef.sections.items():
        for m in members:
            if m not in ids:
                err(("SECTION", "sections.%s" % sec, "unknown agent %r" % m))
            elif m in claimed:
                err(("SECTION", "sections.%s" % sec,
                     "%r already in section %s" % (m, claimed[m])))
            else:
                claimed[m] = sec

    for i, dose in enumerate(pdef.ligand_schedule):
        loc = "ligand_schedule[%d]" % i
        if dose.level not in levels:
            err(("LEVEL", loc, "unknown level %r" % dose.level))
        if dose.magnitude < 0:
            err(("NEGATIVE", loc, "negative dose magnitude"))
        if dose.ligand not in ids:
            warn(("DANGLING", loc, "dose ligand %r not defined" % dose.ligand))

    for i, link in enumerate(pdef.crosstalk_links):
        loc = "crosstalk_links[%d]" % i
        if link.kind not in LINK_KINDS:
            err(("LINK", loc, "unknown link kind %r" % link.kind))
        if link.source not in ids:
            warn(("DANGLING", loc, "link source %r not defined" % link.source))
        if link.target not in ids:
            warn(("DANGLING", loc, "link target %r not defined" % link.target))

    for i, t in enumerate(pdef.translocations):
        loc = "translocations[%d]" % i
        if t.agent not in ids:
            warn(("DANGLING", loc, "translocating agent %r not defined" % t.agent))
        if t.destination not in levels:
            err(("LEVEL", loc, "unknown destination level %r" % t.destination))

    for key, value in pdef.kinetics.items():
        if not (0 < float(value) <= 1):
            err(("KINETICS", "kinetics.%s" % key, "%s must be in (0, 1]" % key))

    return report


# ---------------------------------------------------------------------------
# Assembly and crosstalk
# ---------------------------------------------------------------------------

def assemble_sections(defs):
    """Join pathway sections built incrementally into one definition."""
    defs = list(defs)
    if not defs:
        return PathwayDef()
    base = defs[0]
    merged = PathwayDef(
        name=base.name,
        levels=base.levels,
        aliases=dict(base.aliases),
        agents=list(base.agents),
        ligand_schedule=list(base.ligand_schedule),
        sections={k: list(v) for k, v in base.sections.items()},
        crosstalk_links=list(base.crosstalk_links),
        translocations=list(base.translocations),
        kinetics=dict(base.kinetics),
    )
    seen = set(merged.agent_ids())
    for other in defs[1:]:
        if tuple(other.levels) != tuple(merged.levels):
            raise LevelMismatch(
                "section %r uses levels %r, expected %r"
                % (other.name, other.levels, merged.levels))
        for spec in other.agents:
            if spec.identity in seen:
                raise DuplicateAcrossSections(spec.identity)
            seen.add(spec.identity)
            merged.agents.append(spec)
        merged.ligand_schedule.extend(other.ligand_schedule)
        for sec, members in other.sections.items():
            merged.sections.setdefault(sec, []).extend(members)
        merged.crosstalk_links.extend(other.crosstalk_links)
        merged.translocations.extend(other.translocations)
        merged.aliases.update(other.aliases)
        merged.kinetics.update(other.kinetics)
        if other.name:
            merged.name = merged.name + "+" + other.name if merged.name else other.name
    return merged


def connect_pathways(a, b, links):
    """Merge two pathways and wire the given crosstalk links between them."""
    merged = assemble_sections([a, b])
    ids = set(merged.agent_ids())
    for link in links:
        if link.kind not in LINK_KINDS:
            raise InvalidLinkKind(link.kind)
        if link.source not in ids:
            raise UnknownEndpoint("link source %r" % link.source)
        if link.target not in ids:
            raise UnknownEndpoint("link target %r" % link.target)
        merged.crosstalk_links.append(link)
    return merged


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    kind: str  # "lv" | "activate" | "inhibit" | "psv" | "crosstalk"


def interaction_edges(pdef):
    """The committed interaction graph: LV, IPV, PSV and crosstalk edges."""
    ids = set(pdef.agent_ids())
    edges = []
    for spec in pdef.agents:
        for lig, _ in spec.lv:
            if lig in ids:
                edges.append(Edge(lig, spec.identity, "lv"))
        for e in spec.ipv:
            if e.target in ids:
                kind = "inhibit" if e.effect == "inhibit" else "activate"
                edges.append(Edge(spec.identity, e.target, kind))
        for e in spec.psv:
            if e.kinase == spec.identity:
                continue
            for kinase in pdef.aliases.get(e.kinase, [e.kinase]):
                if kinase in ids:
                    edges.append(Edge(kinase, spec.identity, "psv"))
    for link in pdef.crosstalk_links:
        if link.source in ids and link.target in ids:
            edges.append(Edge(link.source, link.target, "crosstalk"))
    return edges
