"""Bundled EGFR/MAPK pathway model, shipped as package data.

The model is stored as three incrementally-built section files (ligand to
receptor activation, receptor to cytosolic kinases, kinases to transcription
factors) plus their pre-assembled union.
"""

from importlib import resources

from ..pathway import assemble_sections, parse_pathway

SECTION_FILES = ("mapk_section1.json", "mapk_section2.json", "mapk_section3.json")

BUNDLED_NAME = "bundled-mapk"


def _read(name):
    return resources.files(__package__).joinpath(name).read_text(encoding="utf-8")


def bundled_path():
    """Filesystem path of the assembled bundled model file."""
    return str(resources.files(__package__).joinpath("mapk.json"))


def bundled_sections():
    """The three section definitions, in methodology order."""
    return [parse_pathway(_read(name)) for name in SECTION_FILES]


def bundled_mapk():
    """The complete 54-component EGFR/MAPK pathway definition."""
    merged = assemble_sections(bundled_sections())
    merged.name = "mapk-egfr"
    return merged
