"""Regenerate the bundled EGFR/MAPK pathway data files.

Run from the repository root:

    python tools/gen_bundled_data.py

Writes the three section files plus the assembled model under
src/cellulat/data/.  The EGFR, Grb2 and JNKK records carry published initial
values; every other agent uses role-appropriate defaults (IIC 10 nM, rank-1
edges) with the interaction graph committed here as project data.
"""

import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from cellulat.pathway import assemble_sections, parse_pathway, serialize_pathway, validate

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "cellulat" / "data"

LEVELS = ["membrane", "juxtamembrane", "cytoplasm", "nucleus"]

DEFAULT_IIC = 10.0

INFERRED = "defaults; interaction edges inferred"


def ipv(*entries):
    out = []
    for e in entries:
        target, via, rank = e[0], e[1], e[2]
        item = {"target": target, "via": via, "rank": rank}
        if len(e) > 3 and e[3] == "inhibit":
            item["effect"] = "inhibit"
        out.append(item)
    return out


def protein(identity, role, edges=(), dv=("dock",), psv=(), compartment="cytoplasm",
            iic=DEFAULT_IIC, aac=0.0, provenance=INFERRED):
    spec = {
        "id": identity,
        "kind": "protein",
        "compartment": compartment,
        "role": role,
        "iic": iic,
        "aac": aac,
        "iac": iic - aac,
        "provenance": provenance,
    }
    if dv:
        spec["dv"] = [{"domain": d, "state": "free"} for d in dv]
    if edges:
        spec["ipv"] = ipv(*edges)
    if psv:
        spec["psv"] = [{"site": s, "kinase": k, "rank": r} for s, k, r in psv]
    # dict ordering matched to the canonical serializer
    ordered = {k: spec[k] for k in
               ("id", "kind", "compartment", "role", "lv", "psv", "ipv", "dv",
                "iic", "aac", "iac", "provenance") if k in spec}
    return ordered


SECTION_1 = {
    "name": "mapk-egfr-section-1",
    "levels": LEVELS,
    "aliases": {"MAPK": ["ERK1", "ERK2"]},
    "agents": [
        {"id": "EGF", "kind": "ligand", "compartment": "membrane",
         "provenance": "Table 4"},
        {"id": "EGFR", "kind": "receptor", "compartment": "membrane",
         "lv": [{"ligand": "EGF", "rank": 2}],
         "psv": [
             {"site": "Y920", "kinase": "Src", "rank": 1},
             {"site": "Y891", "kinase": "Src", "rank": 2},
             {"site": "Y1173", "kinase": "EGFR", "rank": 1},
             {"site": "Y1148", "kinase": "EGFR", "rank": 2},
             {"site": "Y1086", "kinase": "EGFR", "rank": 2},
             {"site": "Y1068", "kinase": "EGFR", "rank": 2},
             {"site": "Y992", "kinase": "EGFR", "rank": 2},
             {"site": "T654", "kinase": "MAPK", "rank": 2},
             {"site": "T669", "kinase": "MAPK", "rank": 1},
         ],
         "ipv": ipv(("Grb2", "SH2", 3), ("Shc", "SH2", 3),
                    ("PLCg", "SH2", 1), ("PI3K", "p85SH2", 2)),
         "provenance": "Table 5"},
    ],
    "sections": {"I": ["EGF", "EGFR"]},
    "kinetics": {"k_base": 0.1, "k_deact": 0.1},
}

SECTION_2 = {
    "name": "mapk-egfr-section-2",
    "levels": LEVELS,
    "agents": [
        # adapters
        {"id": "Grb2", "kind": "protein", "compartment": "cytoplasm",
         "role": "adapter",
         "ipv": ipv(("Sos", "SH3", 1), ("Gab2", "SH3", 2)),
         "dv": [{"domain": "SH2", "state": "free"},
                {"domain": "SH3A", "state": "free"},
                {"domain": "SH3B", "state": "free"}],
         "iic": 40.0, "aac": 0.0, "iac": 40.0,
         "provenance": "Table 6"},
        protein("Shc", "adapter", edges=(("Grb2", "SH2", 1),), dv=("SH2",)),
        protein("Gab2", "adapter",
                edges=(("PI3K", "p85SH2", 1), ("SHP2", "SH2", 2)), dv=("SH3",)),
        # guanine interchanging proteins
        protein("Sos", "guanine-exchanger", edges=(("Ras", "switch", 1),), dv=("SH3",)),
        protein("p120", "guanine-exchanger",
                edges=(("Ras", "switch", 1, "inhibit"),)),
        protein("p190", "guanine-exchanger",
                edges=(("Rho", "switch", 1, "inhibit"),)),
        protein("p115", "guanine-exchanger", edges=(("Rho", "switch", 2),)),
        protein("cdc42GAP", "guanine-exchanger",
                edges=(("cdc42", "switch", 1, "inhibit"),)),
        protein("RapGAP", "guanine-exchanger",
                edges=(("Rap", "switch", 1, "inhibit"),)),
        protein("Dbl", "guanine-exchanger",
                edges=(("Rho", "switch", 1), ("cdc42", "switch", 1))),
        # G proteins
        protein("Rho", "g-protein", dv=("switch",)),
        protein("Ras", "g-protein",
                edges=(("Raf", "dock", 1), ("KSR", "dock", 1)), dv=("switch",)),
        protein("Rap", "g-protein", dv=("switch",)),
        protein("cdc42", "g-protein", edges=(("PAK", "dock", 2),), dv=("switch",)),
        protein("Rac", "g-protein",
                edges=(("PAK", "dock", 1), ("MLK", "dock", 1)), dv=("switch",)),
        # enzymes
        protein("KSR", "enzyme", edges=(("Raf", "dock", 2),)),
        protein("RasGRP", "enzyme",
                edges=(("Ras", "switch", 2), ("Rap", "switch", 1))),
        protein("RasGRF", "enzyme", edges=(("Ras", "switch", 3),)),
        protein("Src", "enzyme",
                edges=(("SHP1", "dock", 1), ("p120", "dock", 1), ("p190", "dock", 1),
                       ("p115", "dock", 1), ("cdc42GAP", "dock", 1),
                       ("RapGAP", "dock", 1), ("Dbl", "dock", 1),
                       ("JAK", "dock", 1), ("cAbl", "dock", 1))),
        protein("PLCg", "enzyme",
                edges=(("PKC", "dock", 1), ("Pyk2", "dock", 1), ("RasGRF", "dock", 1)),
                dv=("SH2",)),
        protein("SHP2", "enzyme", edges=(("Sos", "SH3", 2),), dv=("SH2",)),
        protein("SHP1", "enzyme", edges=(("JAK", "dock", 1, "inhibit"),)),
    ],
    "sections": {"II": [
        "Grb2", "Shc", "Gab2",
        "Sos", "p120", "p190", "p115", "cdc42GAP", "RapGAP", "Dbl",
        "Rho", "Ras", "Rap", "cdc42", "Rac",
        "KSR", "RasGRP", "RasGRF", "Src", "PLCg", "SHP2", "SHP1",
    ]},
}

SECTION_3 = {
    "name": "mapk-egfr-section-3",
    "levels": LEVELS,
    "agents": [
        # enzymes
        protein("Pyk2", "enzyme", edges=(("Src", "dock", 1),)),
        protein("PI3K", "enzyme",
                edges=(("AKT", "dock", 1), ("Rac", "switch", 2)), dv=("p85SH2",)),
        protein("PAK", "enzyme", edges=(("MEKK", "dock", 2),)),
        protein("Raf", "enzyme", edges=(("MEK", "dock", 1),)),
        protein("JAK", "enzyme", edges=(("STAT", "dock", 1),)),
        protein("MLK", "enzyme", edges=(("MEKK", "dock", 1),)),
        protein("PKC", "enzyme",
                edges=(("Raf", "dock", 2), ("PKD", "dock", 1),
                       ("Pyk2", "dock", 2), ("RasGRP", "dock", 1))),
        protein("PKD", "enzyme"),
        protein("AKT", "enzyme", edges=(("CREB", "dock", 2), ("IP1", "dock", 1))),
        protein("MEK", "enzyme", edges=(("ERK1", "dock", 1), ("ERK2", "dock", 1))),
        protein("MEKK", "enzyme"),
        protein("RSK", "enzyme", edges=(("CREB", "dock", 1), ("SRF", "dock", 1))),
        protein("ERK1", "enzyme", edges=(("RSK", "dock", 1), ("Elk1", "dock", 1))),
        protein("ERK2", "enzyme",
                edges=(("cFos", "dock", 1), ("FosB", "dock", 1), ("MKP1", "dock", 1))),
        {"id": "JNKK", "kind": "protein", "compartment": "cytoplasm",
         "role": "enzyme",
         "psv": [{"site": "TX", "kinase": "MEKK", "rank": 1}],
         "ipv": ipv(("JNK", "Y17", 1)),
         "iic": 1.0, "aac": 0.0, "iac": 1.0,
         "provenance": "Table 7"},
        protein("JNK", "enzyme",
                edges=(("cJun", "dock", 1), ("JunD", "dock", 1), ("JunB", "dock", 1),
                       ("ATF2", "dock", 1), ("Elk1", "dock", 2)),
                psv=(("Y17", "JNKK", 1),)),
        protein("MKP1", "enzyme",
                edges=(("ERK1", "dock", 1, "inhibit"), ("JNK", "dock", 1, "inhibit"))),
        # transcription factors
        protein("cFos", "transcription-factor", edges=(("AP1", "dock", 1),),
                compartment="nucleus"),
        protein("cJun", "transcription-factor", edges=(("AP1", "dock", 1),),
                compartment="nucleus"),
        protein("JunD", "transcription-factor", compartment="nucleus"),
        protein("FosB", "transcription-factor", edges=(("AP1", "dock", 2),),
                compartment="nucleus"),
        protein("JunB", "transcription-factor", edges=(("AP1", "dock", 2),),
                compartment="nucleus"),
        protein("AP1", "transcription-factor", compartment="nucleus"),
        protein("IP1", "transcription-factor", edges=(("AP1", "dock", 1, "inhibit"),),
                compartment="nucleus"),
        protein("Elk1", "transcription-factor", compartment="nucleus"),
        protein("CREB", "transcription-factor", compartment="nucleus"),
        protein("cAbl", "transcription-factor", compartment="nucleus"),
        protein("STAT", "transcription-factor", compartment="nucleus"),
        protein("ATF2", "transcription-factor", compartment="nucleus"),
        protein("SRF", "transcription-factor", compartment="nucleus"),
    ],
    "sections": {"III": [
        "Pyk2", "PI3K", "PAK", "Raf", "JAK", "MLK", "PKC", "PKD", "AKT",
        "MEK", "MEKK", "RSK", "ERK1", "ERK2", "JNKK", "JNK", "MKP1",
        "cFos", "cJun", "JunD", "FosB", "JunB", "AP1", "IP1", "Elk1",
        "CREB", "cAbl", "STAT", "ATF2", "SRF",
    ]},
}


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    sections = []
    for name, doc in (
        ("mapk_section1.json", SECTION_1),
        ("mapk_section2.json", SECTION_2),
        ("mapk_section3.json", SECTION_3),
    ):
        text = json.dumps(doc, indent=2) + "\n"
        pdef = parse_pathway(text)  # sanity: files must parse in strict mode
        sections.append(pdef)
        # write the canonical form so parse -> serialize is a fixed point
        (OUT / name).write_text(serialize_pathway(pdef))
        print("wrote", OUT / name)

    combined = assemble_sections(sections)
    combined.name = "mapk-egfr"
    report = validate(combined)
    if report.errors or report.warnings:
        for item in report.errors + report.warnings:
            print("  ", item)
        raise SystemExit("bundled model must validate cleanly")
    (OUT / "mapk.json").write_text(serialize_pathway(combined))
    print("wrote", OUT / "mapk.json", "(%d agents)" % len(combined.agents))


if __name__ == "__main__":
    main()
