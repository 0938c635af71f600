"""Interface agents (receptors) and internal agents (signalling proteins).

Receptors are aggregate state machines over SS/PS/AS; proteins carry a
domain vector and a conserved active/inactive concentration pair.  The
behaviour repertoire here is the low-level API; the rule engine compiles
these behaviours into production rules for event-directed execution.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

from .blackboard import SignalKind
from .errors import (
    ConservationViolation,
    DomainBusy,
    DuplicateIdentity,
    InactiveSource,
    InvalidRank,
    NegativeConcentration,
    NotActive,
    NotDimerized,
    NotInIPV,
    NotPhosphorylated,
    UnknownDomain,
    UnknownPartner,
    UnknownSite,
)

CONSERVATION_TOL = 1e-9

# Below this residual the remaining pool is absorbed in one transfer, so
# repeated fractional transfers terminate instead of decaying forever.
RESIDUAL_EPS = 1e-12

DOMAIN_FREE = "free"
DOMAIN_BOUND = "bound"
DOMAIN_PHOSPHORYLATED = "phosphorylated"

ROLE_TAGS = ("adapter", "guanine-exchanger", "g-protein", "enzyme", "transcription-factor")

KIND_RECEPTOR = "receptor"
KIND_PROTEIN = "protein"
KIND_LIGAND = "ligand"


@dataclass
class PhosphoSite:
    site: str
    kinase: str
    rank: int
    phosphorylated: bool = False


@dataclass
class IpvEntry:
    target: str
    via: str  # domain or site on the target
    rank: int
    effect: str = "activate"  # or "inhibit"


@dataclass
class AgentSpec:
    """Declarative initial values for one agent, as read from a pathway file."""

    identity: str
    kind: str  # receptor | protein | ligand
    compartment: str
    role: str | None = None
    lv: list = field(default_factory=list)  # [(ligand, rank)]
    psv: list = field(default_factory=list)  # [PhosphoSite]
    ipv: list = field(default_factory=list)  # [IpvEntry]
    dv: list = field(default_factory=list)  # [(domain, state)]
    iic: float = 0.0
    aac: float = 0.0
    iac: float = 0.0
    provenance: str | None = None


@dataclass
class LigandAgent:
    """Inert signalling-molecule species (e.g. EGF); carries no behaviour."""

    identity: str
    compartment: str


@dataclass
class ReceptorAgent:
    identity: str
    compartment: str
    lv: list = field(default_factory=list)
    psv: list = field(default_factory=list)
    ipv: list = field(default_factory=list)
    ss: int = 0  # 0 = monomer, 1 = dimer
    ps: int = 0
    as_state: int = 0
    ligand_bound: bool = False

    def site(self, name):
        for entry in self.psv:
            if entry.site == name:
                return entry
        return None

    def autophospho_done(self):
        return any(e.phosphorylated for e in self.psv if e.kinase == self.identity)


class ProteinAgent:
    """Internal agent.  AAC is the stored quantity; IAC = IIC - AAC, so the
    conserved sum holds exactly at every tick."""

    def __init__(self, identity, compartment, iic, aac=0.0, dv=(), ipv=(), psv=(),
                 role=None, ps=0):
        if iic < 0 or aac < 0:
            raise NegativeConcentration(
                "%s: concentrations must be >= 0" % identity)
        self.identity = identity
        self.compartment = compartment
        self.iic = float(iic)
        self._aac = float(aac)
        self.domains = dict(dv)
        self.ipv = list(ipv)
        self.psv = list(psv)
        self.role = role
        self.ps = ps

    @property
    def aac(self):
        return self._aac

    @property
    def iac(self):
        return self.iic - self._aac

    def activate_amount(self, delta):
        """Move up to `delta` nM from the inactive to the active pool."""
        delta = min(max(delta, 0.0), self.iac)
        self._aac += delta
        if self.iic - self._aac < RESIDUAL_EPS:
            self._aac = self.iic
        return delta

    def deactivate_amount(self, delta):
        delta = min(max(delta, 0.0), self._aac)
        self._aac -= delta
        if self._aac < RESIDUAL_EPS:
            self._aac = 0.0
        return delta

    def site(self, name):
        for entry in self.psv:
            if entry.site == name:
                return entry
        return None

    def __repr__(self):
        return "ProteinAgent(%s, aac=%g, iac=%g)" % (self.identity, self.aac, self.iac)


def _check_ranks(spec):
    for lig, rank in spec.lv:
        if rank < 1:
            raise InvalidRank("%s: LV rank for %s must be >= 1" % (spec.identity, lig))
    for e in spec.psv:
        if e.rank < 1:
            raise InvalidRank("%s: PSV rank for %s must be >= 1" % (spec.identity, e.site))
    for e in spec.ipv:
        if e.rank < 1:
            raise InvalidRank("%s: IPV rank for %s must be >= 1" % (spec.identity, e.target))


def create_receptor(spec, registry):
    """Instantiate a receptor from its spec into `registry` (identity -> agent)."""
    if spec.identity in registry:
        raise DuplicateIdentity(spec.identity)
    _check_ranks(spec)
    if not spec.lv:
        warnings.warn("receptor %s has an empty ligand vector; it is inert" % spec.identity)
    agent = ReceptorAgent(
        identity=spec.identity,
        compartment=spec.compartment,
        lv=[(lig, rank) for lig, rank in spec.lv],
        psv=[PhosphoSite(e.site, e.kinase, e.rank, False) for e in spec.psv],
        ipv=[IpvEntry(e.target, e.via, e.rank, e.effect) for e in spec.ipv],
    )
    registry[spec.identity] = agent
    return agent


def create_protein(spec, registry):
    if spec.identity in registry:
        raise DuplicateIdentity(spec.identity)
    _check_ranks(spec)
    if spec.iic < 0 or spec.aac < 0 or spec.iac < 0:
        raise NegativeConcentration(spec.identity)
    if abs(spec.aac + spec.iac - spec.iic) > CONSERVATION_TOL:
        raise ConservationViolation(
            "%s: AAC (%g) + IAC (%g) != IIC (%g)" % (spec.identity, spec.aac, spec.iac, spec.iic))
    agent = ProteinAgent(
        identity=spec.identity,
        compartment=spec.compartment,
        iic=spec.iic,
        aac=spec.aac,
        dv=[(d, s) for d, s in spec.dv],
        ipv=[IpvEntry(e.target, e.via, e.rank, e.effect) for e in spec.ipv],
        psv=[PhosphoSite(e.site, e.kinase, e.rank, False) for e in spec.psv],
        role=spec.role,
        ps=0,
    )
    registry[spec.identity] = agent
    return agent


def external_interaction(receptor, ligand_signal, peers=None):
    """Ligand binding plus dimerization.

    With `peers=None` the receptor is treated as an aggregate that pairs with
    itself: binding a ligand with magnitude > 0 dimerizes it in the same tick.
    With an explicit peer list, dimerization requires another ligand-bound
    monomer of the same identity, and both copies flip SS together.

    Returns "bound" or "ignored".
    """
    if ligand_signal.kind != SignalKind.MOLECULE:
        return "ignored"
    if not any(lig == ligand_signal.subject for lig, _ in receptor.lv):
        return "ignored"
    if ligand_signal.magnitude <= 0:
        return "ignored"
    receptor.ligand_bound = True
    if peers is None:
        receptor.ss = 1
    else:
        partners = [
            p for p in peers
            if p is not receptor and p.identity == receptor.identity and p.ligand_bound
        ]
        if partners:
            receptor.ss = 1
            partners[0].ss = 1
    return "bound"


def phosphorylate_receptor(receptor, site, kinase):
    entry = receptor.site(site)
    if entry is None or entry.kinase != kinase:
        raise UnknownSite("%s has no PSV entry (%s, %s)" % (receptor.identity, site, kinase))
    if kinase == receptor.identity and receptor.ss != 1:
        raise NotDimerized("autophosphorylation of %s requires SS = 1" % receptor.identity)
    entry.phosphorylated = True
    if receptor.autophospho_done():
        receptor.ps = 1
    return receptor


def activate_receptor(receptor, board, tick):
    """Set AS = 1 and post the receptor's activation signal one level inward.

    Idempotent: an already-active receptor emits no duplicate signal and the
    call returns None.
    """
    if receptor.ps != 1:
        raise NotPhosphorylated(receptor.identity)
    if receptor.as_state == 1:
        return None
    receptor.as_state = 1
    level = board.level_after(receptor.compartment)
    sig = board.new_signal(
        SignalKind.ACTIVATION, receptor.identity, level, receptor.identity, 1.0, tick)
    board.post(sig)
    return sig


def internal_interaction(receptor, protein):
    """Dock a partner protein onto an active receptor.

    Returns the matching IPV entry so the caller can schedule the
    concentration transfer.
    """
    if receptor.as_state != 1:
        raise NotActive(receptor.identity)
    entry = next((e for e in receptor.ipv if e.target == protein.identity), None)
    if entry is None:
        raise UnknownPartner("%s is not in the IPV of %s" % (protein.identity, receptor.identity))
    if protein.aac <= 0 and protein.iac <= 0:
        raise UnknownPartner("%s has no available pool" % protein.identity)
    if protein.domains.get(entry.via) == DOMAIN_FREE:
        protein.domains[entry.via] = DOMAIN_BOUND
    return entry


def protein_receptor_interaction(protein, receptor):
    if receptor.as_state != 1:
        raise NotActive(receptor.identity)
    entry = next((e for e in receptor.ipv if e.target == protein.identity), None)
    if entry is None:
        raise UnknownPartner("%s is not in the IPV of %s" % (protein.identity, receptor.identity))
    if entry.via not in protein.domains:
        raise UnknownDomain("%s has no domain %s" % (protein.identity, entry.via))
    if protein.domains[entry.via] != DOMAIN_FREE:
        raise DomainBusy("%s.%s is not free" % (protein.identity, entry.via))
    protein.domains[entry.via] = DOMAIN_BOUND
    return entry


def protein_protein_interaction(p1, p2):
    """Apply p1's IPV entry for p2: domain docking or kinase site action."""
    entry = next((e for e in p1.ipv if e.target == p2.identity), None)
    if entry is None:
        raise NotInIPV("%s is not in the IPV of %s" % (p2.identity, p1.identity))
    if p1.aac <= 0:
        raise InactiveSource(p1.identity)
    if entry.via in p2.domains:
        if p2.domains[entry.via] == DOMAIN_FREE:
            p2.domains[entry.via] = DOMAIN_BOUND
    else:
        site = p2.site(entry.via)
        if site is not None:
            site.phosphorylated = True
        p2.ps = 1
    return entry


def change_state_domain(protein, domain, new_state):
    if domain not in protein.domains:
        raise UnknownDomain("%s has no domain %s" % (protein.identity, domain))
    protein.domains[domain] = new_state
    return protein
