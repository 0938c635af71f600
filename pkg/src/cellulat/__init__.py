"""Cellulat: an agent-based simulator for intracellular signalling.

A shared blackboard divided into compartment levels carries signals between
autonomous agents (receptors, proteins, ligands) whose behaviour is compiled
into production rules.  On top of the kernel sit a pathway-definition file
format, an experiments harness, a command line and an HTTP laboratory
service.
"""

from .agents import (
    AgentSpec,
    IpvEntry,
    LigandAgent,
    PhosphoSite,
    ProteinAgent,
    ReceptorAgent,
    create_protein,
    create_receptor,
)
from .blackboard import (
    AgencyColumn,
    Blackboard,
    Event,
    Signal,
    SignalKind,
    TraceEntry,
    extract_columns,
)
from .data import BUNDLED_NAME, bundled_mapk, bundled_path, bundled_sections
from .engine import TimeSeries, World, inject_ligand, run, step
from .errors import CellulatError, ValidationFailed
from .experiments import (
    Experiment,
    ExperimentResults,
    compare,
    export,
    knockout,
    reachability_oracle,
    run_experiment,
)
from .kinetics import KineticsParams, kinetics_update
from .pathway import (
    CrosstalkLink,
    Dose,
    PathwayDef,
    Translocation,
    assemble_sections,
    connect_pathways,
    interaction_edges,
    parse_pathway,
    serialize_pathway,
    validate,
)
from .service import create_app

__version__ = "1.0.0"

__all__ = [
    "AgencyColumn",
    "AgentSpec",
    "Blackboard",
    "BUNDLED_NAME",
    "CellulatError",
    "CrosstalkLink",
    "Dose",
    "Event",
    "Experiment",
    "ExperimentResults",
    "IpvEntry",
    "KineticsParams",
    "LigandAgent",
    "PathwayDef",
    "PhosphoSite",
    "ProteinAgent",
    "ReceptorAgent",
    "Signal",
    "SignalKind",
    "TimeSeries",
    "TraceEntry",
    "Translocation",
    "ValidationFailed",
    "World",
    "assemble_sections",
    "bundled_mapk",
    "bundled_path",
    "bundled_sections",
    "compare",
    "connect_pathways",
    "create_app",
    "create_protein",
    "create_receptor",
    "export",
    "extract_columns",
    "inject_ligand",
    "interaction_edges",
    "kinetics_update",
    "knockout",
    "parse_pathway",
    "reachability_oracle",
    "run",
    "run_experiment",
    "serialize_pathway",
    "step",
    "validate",
]
