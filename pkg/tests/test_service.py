import json

import pytest
from fastapi.testclient import TestClient

from cellulat.service import create_app

BUNDLED = {"name": "bundled-mapk"}

TINY = {
    "pathway": {
        "name": "tiny",
        "levels": ["membrane", "juxtamembrane", "cytoplasm", "nucleus"],
        "agents": [
            {"id": "EGF", "kind": "ligand", "compartment": "membrane"},
            {"id": "EGFR", "kind": "receptor", "compartment": "membrane",
             "lv": [{"ligand": "EGF", "rank": 1}],
             "psv": [{"site": "Y1", "kinase": "EGFR", "rank": 1}],
             "ipv": [{"target": "Grb2", "via": "SH2", "rank": 1}]},
            {"id": "Grb2", "kind": "protein", "compartment": "cytoplasm",
             "role": "adapter",
             "dv": [{"domain": "SH2", "state": "free"}],
             "iic": 40.0, "aac": 0.0, "iac": 40.0},
        ],
    }
}


@pytest.fixture
def client():
    with TestClient(create_app()) as c:
        yield c


def new_session(client, body=None):
    resp = client.post("/sessions", json=body or TINY)
    assert resp.status_code == 201, resp.text
    return resp.json()["id"]


def dose(client, sid, ligand="EGF", magnitude=2.0):
    return client.post("/sessions/%s/perturb" % sid, json={
        "kind": "inject-ligand",
        "payload": {"ligand": ligand, "magnitude": magnitude}})


class TestSessionLifecycle:
    def test_create_bundled_session(self, client):
        sid = new_session(client, BUNDLED)
        snap = client.get("/sessions/%s/snapshot" % sid).json()
        assert snap["tick"] == 0
        assert len(snap["agents"]) == 54
        assert snap["agents"]["Grb2"]["aac"] == 0.0
        assert snap["agents"]["Grb2"]["iac"] == 40.0

    def test_create_requires_pathway_or_name(self, client):
        resp = client.post("/sessions", json={"nothing": True})
        assert resp.status_code == 400
        assert resp.json()["code"] == "BadRequest"

    def test_invalid_pathway_rejected_with_details(self, client):
        bad = json.loads(json.dumps(TINY))
        bad["pathway"]["agents"][2]["aac"] = 7.0  # breaks conservation
        resp = client.post("/sessions", json=bad)
        assert resp.status_code == 422
        assert resp.json()["code"] == "ValidationFailed"

    def test_malformed_schema_rejected(self, client):
        bad = json.loads(json.dumps(TINY))
        bad["pathway"]["surprise"] = 1
        resp = client.post("/sessions", json=bad)
        assert resp.status_code == 400
        assert resp.json()["code"] == "SchemaError"

    def test_unknown_session_is_404(self, client):
        for url in ("/sessions/nope/snapshot", "/sessions/nope/replay"):
            assert client.get(url).status_code == 404
        assert client.post("/sessions/nope/advance", json={"ticks": 1}).status_code == 404
        assert client.delete("/sessions/nope").status_code == 404

    def test_delete_forgets_the_session(self, client):
        sid = new_session(client)
        assert client.delete("/sessions/%s" % sid).status_code == 200
        assert client.get("/sessions/%s/snapshot" % sid).status_code == 404


class TestAdvanceAndPerturb:
    def test_advance_moves_the_clock(self, client):
        sid = new_session(client)
        snap = client.post("/sessions/%s/advance" % sid, json={"ticks": 5}).json()
        assert snap["tick"] == 5

    def test_negative_ticks_rejected(self, client):
        sid = new_session(client)
        resp = client.post("/sessions/%s/advance" % sid, json={"ticks": -2})
        assert resp.status_code == 400

    def test_dose_applies_at_next_tick_boundary(self, client):
        sid = new_session(client)
        resp = dose(client, sid)
        assert resp.json() == {"applied_at_tick": 1}
        snap = client.post("/sessions/%s/advance" % sid, json={"ticks": 4}).json()
        assert snap["agents"]["EGFR"]["as"] == 1
        assert snap["agents"]["Grb2"]["aac"] > 0

    def test_knockout_perturbation(self, client):
        sid = new_session(client)
        dose(client, sid)
        client.post("/sessions/%s/perturb" % sid, json={
            "kind": "knockout-agent", "payload": {"agent": "Grb2"}})
        snap = client.post("/sessions/%s/advance" % sid, json={"ticks": 5}).json()
        assert "Grb2" not in snap["agents"]
        assert snap["agents"]["EGFR"]["as"] == 1

    def test_knockout_unknown_agent_is_404(self, client):
        sid = new_session(client)
        resp = client.post("/sessions/%s/perturb" % sid, json={
            "kind": "knockout-agent", "payload": {"agent": "Gandalf"}})
        assert resp.status_code == 404

    def test_set_kinetics_perturbation(self, client):
        a = new_session(client)
        b = new_session(client)
        for sid in (a, b):
            dose(client, sid)
        client.post("/sessions/%s/perturb" % b, json={
            "kind": "set-kinetics", "payload": {"k_base": 0.01}})
        fast = client.post("/sessions/%s/advance" % a, json={"ticks": 10}).json()
        slow = client.post("/sessions/%s/advance" % b, json={"ticks": 10}).json()
        assert slow["agents"]["Grb2"]["aac"] < fast["agents"]["Grb2"]["aac"]

    def test_invalid_kinetics_rejected_upfront(self, client):
        sid = new_session(client)
        resp = client.post("/sessions/%s/perturb" % sid, json={
            "kind": "set-kinetics", "payload": {"k_base": 5.0}})
        assert resp.status_code == 400

    def test_unknown_perturbation_kind_rejected(self, client):
        sid = new_session(client)
        resp = client.post("/sessions/%s/perturb" % sid, json={
            "kind": "time-travel", "payload": {}})
        assert resp.status_code == 400

    def test_sessions_are_isolated(self, client):
        a = new_session(client)
        b = new_session(client)
        dose(client, a)
        snap_a = client.post("/sessions/%s/advance" % a, json={"ticks": 5}).json()
        snap_b = client.post("/sessions/%s/advance" % b, json={"ticks": 5}).json()
        assert snap_a["agents"]["Grb2"]["aac"] > 0
        assert snap_b["agents"]["Grb2"]["aac"] == 0.0


class TestReplay:
    def _strip_session(self, snap):
        snap = dict(snap)
        snap.pop("session")
        return snap

    def test_replay_reproduces_the_final_snapshot(self, client):
        sid = new_session(client, BUNDLED)
        dose(client, sid)
        client.post("/sessions/%s/advance" % sid, json={"ticks": 50})
        client.post("/sessions/%s/perturb" % sid, json={
            "kind": "knockout-agent", "payload": {"agent": "Ras"}})
        client.post("/sessions/%s/advance" % sid, json={"ticks": 50})
        final = client.get("/sessions/%s/snapshot" % sid).json()
        replayed = client.get("/sessions/%s/replay" % sid).json()
        assert self._strip_session(replayed) == self._strip_session(final)

    def test_replay_does_not_disturb_the_live_session(self, client):
        sid = new_session(client)
        dose(client, sid)
        client.post("/sessions/%s/advance" % sid, json={"ticks": 3})
        before = client.get("/sessions/%s/snapshot" % sid).json()
        client.get("/sessions/%s/replay" % sid)
        after = client.get("/sessions/%s/snapshot" % sid).json()
        assert before == after


class TestStream:
    def test_stream_delivers_per_tick_deltas(self, client):
        import threading

        sid = new_session(client)
        dose(client, sid)

        def advance_later():
            import time
            time.sleep(0.3)  # let the stream subscribe first
            with TestClient(client.app) as other:
                other.post("/sessions/%s/advance" % sid, json={"ticks": 3})

        worker = threading.Thread(target=advance_later)
        worker.start()
        with client.stream(
                "GET", "/sessions/%s/stream" % sid,
                params={"max_events": 3}) as resp:
            assert resp.status_code == 200
            body = "".join(resp.iter_text())
        worker.join()
        frames = [json.loads(line[len("data: "):])
                  for line in body.split("\n") if line.startswith("data: ")]
        assert [f["tick"] for f in frames] == [1, 2, 3]
        assert "EGFR" in frames[1]["changed_agents"]

    def test_slow_consumer_gets_a_gap_marker(self, client):
        sid = new_session(client)
        # shrink the buffer so overflow is easy to provoke
        registry = client.app.state.registry
        session = registry.get(sid)
        session.stream_buffer = 4
        dose(client, sid)
        sub = session.subscribe()
        client.post("/sessions/%s/advance" % sid, json={"ticks": 10})
        messages = sub.drain()
        assert messages[0]["gap"] is True
        assert messages[0]["first_missed_tick"] == 1
        assert messages[0]["last_missed_tick"] == 6
        assert [m["tick"] for m in messages[1:]] == [7, 8, 9, 10]
