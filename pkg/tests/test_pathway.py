import json

import pytest

from cellulat.data import bundled_mapk, bundled_sections
from cellulat.errors import (
    DuplicateAcrossSections,
    InvalidLinkKind,
    LevelMismatch,
    PathwaySyntaxError,
    SchemaError,
    UnknownEndpoint,
)
from cellulat.pathway import (
    CrosstalkLink,
    assemble_sections,
    connect_pathways,
    interaction_edges,
    parse_pathway,
    serialize_pathway,
    validate,
)

from helpers import make_rng, random_pathway

GOOD = {
    "name": "tiny",
    "levels": ["membrane", "juxtamembrane", "cytoplasm", "nucleus"],
    "agents": [
        {"id": "L", "kind": "ligand", "compartment": "membrane"},
        {"id": "R", "kind": "receptor", "compartment": "membrane",
         "lv": [{"ligand": "L", "rank": 1}]},
        {"id": "P", "kind": "protein", "compartment": "cytoplasm",
         "iic": 5.0, "aac": 0.0, "iac": 5.0},
    ],
}


def doc(**over):
    d = json.loads(json.dumps(GOOD))
    d.update(over)
    return d


class TestParsing:
    def test_good_document_parses(self):
        pdef = parse_pathway(json.dumps(GOOD))
        assert pdef.name == "tiny"
        assert pdef.agent_ids() == ["L", "R", "P"]

    def test_syntax_error_carries_position(self):
        with pytest.raises(PathwaySyntaxError) as exc:
            parse_pathway('{"name": "x",\n  "agents": [}')
        assert exc.value.line == 2
        assert exc.value.column > 0
        assert exc.value.pos > 0

    def test_non_object_document_rejected(self):
        with pytest.raises(SchemaError):
            parse_pathway("[1, 2, 3]")

    def test_unknown_top_level_key_located(self):
        with pytest.raises(SchemaError) as exc:
            parse_pathway(json.dumps(doc(extra=1)))
        assert exc.value.location == "$"

    def test_unknown_agent_field_located(self):
        d = doc()
        d["agents"][2]["color"] = "green"
        with pytest.raises(SchemaError) as exc:
            parse_pathway(json.dumps(d))
        assert exc.value.location == "$.agents[2]"

    def test_unknown_nested_field_located(self):
        d = doc()
        d["agents"][1]["lv"][0]["affinity"] = 9
        with pytest.raises(SchemaError) as exc:
            parse_pathway(json.dumps(d))
        assert exc.value.location == "$.agents[1].lv[0]"

    def test_duplicate_agent_ids_name_both_locations(self):
        d = doc()
        d["agents"].append(dict(d["agents"][0]))
        with pytest.raises(SchemaError) as exc:
            parse_pathway(json.dumps(d))
        assert "$.agents[0]" in str(exc.value)
        assert "$.agents[3]" in str(exc.value)

    def test_unknown_agent_kind_rejected(self):
        d = doc()
        d["agents"][0]["kind"] = "organelle"
        with pytest.raises(SchemaError):
            parse_pathway(json.dumps(d))

    def test_ligands_carry_no_concentrations(self):
        d = doc()
        d["agents"][0]["iic"] = 1.0
        with pytest.raises(SchemaError) as exc:
            parse_pathway(json.dumps(d))
        assert exc.value.location == "$.agents[0].iic"

    def test_missing_required_field(self):
        d = doc()
        del d["agents"][2]["iac"]
        with pytest.raises(SchemaError):
            parse_pathway(json.dumps(d))

    def test_unknown_effect_rejected(self):
        d = doc()
        d["agents"][2]["ipv"] = [
            {"target": "R", "via": "x", "rank": 1, "effect": "boost"}]
        with pytest.raises(SchemaError):
            parse_pathway(json.dumps(d))

    def test_unknown_link_kind_rejected(self):
        d = doc(crosstalk_links=[{"source": "P", "target": "R", "kind": "psychic"}])
        with pytest.raises(SchemaError):
            parse_pathway(json.dumps(d))


class TestRoundTrip:
    def test_bundled_model_round_trips(self):
        pdef = bundled_mapk()
        assert parse_pathway(serialize_pathway(pdef)) == pdef

    def test_section_files_are_canonical_fixed_points(self):
        for section in bundled_sections():
            text = serialize_pathway(section)
            assert serialize_pathway(parse_pathway(text)) == text

    def test_hundred_random_files_round_trip(self):
        rng = make_rng(123)
        for _ in range(100):
            pdef = random_pathway(rng)
            text = serialize_pathway(pdef)
            again = parse_pathway(text)
            assert again == pdef
            assert serialize_pathway(again) == text


class TestValidation:
    def test_bundled_model_is_clean(self):
        report = validate(bundled_mapk())
        assert report.errors == []
        assert report.warnings == []

    def _codes(self, pdef, bucket="errors"):
        return [item[0] for item in getattr(validate(pdef), bucket)]

    def test_conservation_error(self):
        pdef = parse_pathway(json.dumps(GOOD))
        pdef.agents[2].aac = 3.0
        assert "CONSERVATION" in self._codes(pdef)

    def test_negative_concentration_error(self):
        pdef = parse_pathway(json.dumps(GOOD))
        pdef.agents[2].iic = pdef.agents[2].iac = -5.0
        assert "NEGATIVE" in self._codes(pdef)

    def test_unknown_compartment_error(self):
        pdef = parse_pathway(json.dumps(GOOD))
        pdef.agents[0].compartment = "vacuole"
        assert "LEVEL" in self._codes(pdef)

    def test_rank_error(self):
        pdef = parse_pathway(json.dumps(GOOD))
        pdef.agents[1].lv = [("L", 0)]
        assert "RANK" in self._codes(pdef)

    def test_dangling_reference_is_a_warning_not_an_error(self):
        pdef = parse_pathway(json.dumps(doc()))
        pdef.agents[1].lv = [("NGF", 1)]
        report = validate(pdef)
        assert report.errors == []
        assert [w[0] for w in report.warnings] == ["DANGLING"]

    def test_section_membership_checked(self):
        pdef = parse_pathway(json.dumps(doc(sections={"I": ["L", "ghost"]})))
        assert "SECTION" in self._codes(pdef)

    def test_agent_cannot_sit_in_two_sections(self):
        pdef = parse_pathway(json.dumps(doc(sections={"I": ["L"], "II": ["L"]})))
        assert "SECTION" in self._codes(pdef)

    def test_kinetics_bounds_checked(self):
        pdef = parse_pathway(json.dumps(doc(kinetics={"k_base": 2.0})))
        assert "KINETICS" in self._codes(pdef)


class TestAssembly:
    def test_sections_merge_in_order(self):
        merged = assemble_sections(bundled_sections())
        assert len(merged.agents) == 54
        assert set(merged.sections) == {"I", "II", "III"}

    def test_duplicate_across_sections_rejected(self):
        a = parse_pathway(json.dumps(GOOD))
        b = parse_pathway(json.dumps(GOOD))
        with pytest.raises(DuplicateAcrossSections):
            assemble_sections([a, b])

    def test_level_scheme_must_agree(self):
        a = parse_pathway(json.dumps(GOOD))
        b = parse_pathway(json.dumps(doc(
            name="other", levels=["membrane", "cytoplasm"],
            agents=[{"id": "Q", "kind": "protein", "compartment": "cytoplasm",
                     "iic": 1.0, "aac": 0.0, "iac": 1.0}])))
        with pytest.raises(LevelMismatch):
            assemble_sections([a, b])

    def test_connect_pathways_adds_links(self):
        a = parse_pathway(json.dumps(GOOD))
        b = parse_pathway(json.dumps(doc(
            name="other",
            agents=[{"id": "Q", "kind": "protein", "compartment": "cytoplasm",
                     "iic": 1.0, "aac": 0.0, "iac": 1.0}])))
        merged = connect_pathways(a, b, [
            CrosstalkLink("P", "Q", "second-messenger-input")])
        assert merged.crosstalk_links[-1].target == "Q"

    def test_connect_rejects_unknown_endpoint(self):
        a = parse_pathway(json.dumps(GOOD))
        b = parse_pathway(json.dumps(doc(name="other", agents=[])))
        with pytest.raises(UnknownEndpoint):
            connect_pathways(a, b, [CrosstalkLink("P", "ghost", "enzyme-substrate")])

    def test_connect_rejects_unknown_kind(self):
        a = parse_pathway(json.dumps(GOOD))
        b = parse_pathway(json.dumps(doc(name="other", agents=[])))
        with pytest.raises(InvalidLinkKind):
            connect_pathways(a, b, [CrosstalkLink("P", "P", "telepathy")])


class TestInteractionGraph:
    def test_edges_cover_lv_ipv_and_psv(self):
        pdef = bundled_mapk()
        edges = {(e.source, e.target, e.kind) for e in interaction_edges(pdef)}
        assert ("EGF", "EGFR", "lv") in edges
        assert ("EGFR", "Grb2", "activate") in edges
        assert ("p120", "Ras", "inhibit") in edges
        # alias-expanded kinase edge
        assert ("ERK1", "EGFR", "psv") in edges
        assert ("ERK2", "EGFR", "psv") in edges

    def test_autophosphorylation_makes_no_self_edge(self):
        pdef = bundled_mapk()
        assert all(e.source != e.target for e in interaction_edges(pdef))
