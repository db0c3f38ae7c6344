import json
import os
import random
import threading
from http.client import HTTPConnection

import pytest

from confik.service import ConfiguratorService, make_server

from helpers import FIG1B

UV_XY_MODEL = """\
feature root
  feature u optional
  feature v optional
  feature x optional
  feature y optional
constraint u | v
constraint x -> y
"""


@pytest.fixture
def server():
    svc = ConfiguratorService(token_rng=random.Random(2024))
    srv = make_server(svc, port=0)
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    yield srv
    srv.shutdown()
    srv.server_close()


def request(srv, method, path, body=None):
    host, port = srv.server_address[:2]
    conn = HTTPConnection(host, port, timeout=10)
    payload = json.dumps(body) if body is not None else None
    conn.request(method, path, payload, {"Content-Type": "application/json"})
    resp = conn.getresponse()
    raw = resp.read()
    conn.close()
    return resp.status, json.loads(raw) if raw else None


def by_name(doc):
    return {v["name"]: v for v in doc["variables"]}


class TestCreateAndGet:
    def test_create_fig1b_matches_golden(self, server):
        status, doc = request(server, "POST", "/sessions", {"model": FIG1B, "name": "fig1b"})
        assert status == 200
        golden_path = os.path.join(os.path.dirname(__file__), "data", "fig1b_session.json")
        with open(golden_path) as fh:
            golden = json.load(fh)
        assert doc == golden

    def test_get_state_roundtrip(self, server):
        _, doc = request(server, "POST", "/sessions", {"model": FIG1B})
        status, again = request(server, "GET", f"/sessions/{doc['id']}")
        assert status == 200
        assert again == doc

    def test_unknown_session_404(self, server):
        status, err = request(server, "GET", "/sessions/feedfeed")
        assert status == 404
        assert err["error"] == "unknown_session"

    def test_unsatisfiable_model_422(self, server):
        status, err = request(
            server, "POST", "/sessions",
            {"model": "feature r\n  feature a mandatory\nconstraint !a\n"},
        )
        assert status == 422
        assert err["error"] == "unsatisfiable_model"

    def test_invalid_model_text_422(self, server):
        status, err = request(server, "POST", "/sessions", {"model": "gadget r\n"})
        assert status == 422
        assert err["error"] == "invalid_model"

    def test_malformed_body_400(self, server):
        status, err = request(server, "POST", "/sessions", {"model": 42})
        assert status == 400

    def test_no_model_no_default_400(self, server):
        status, err = request(server, "POST", "/sessions", {})
        assert status == 400
        assert err["error"] == "missing_model"


class TestDecide:
    def test_select_a_deselects_b(self, server):
        _, doc = request(server, "POST", "/sessions", {"model": FIG1B})
        sid = doc["id"]
        status, doc = request(
            server, "POST", f"/sessions/{sid}/decisions", {"var": "a", "value": True}
        )
        assert status == 200
        vars_ = by_name(doc)
        assert vars_["a"]["status"] == "user_true"
        assert vars_["b"]["status"] == "inferred_false"
        assert vars_["a"]["selectable_true"] is False
        assert vars_["a"]["selectable_false"] is False

    def test_conflicting_decision_409(self, server):
        _, doc = request(server, "POST", "/sessions", {"model": FIG1B})
        sid = doc["id"]
        request(server, "POST", f"/sessions/{sid}/decisions", {"var": "a", "value": True})
        status, err = request(
            server, "POST", f"/sessions/{sid}/decisions", {"var": "a", "value": False}
        )
        assert status == 409
        assert err["error"] == "already_assigned"

    def test_unknown_variable_400(self, server):
        _, doc = request(server, "POST", "/sessions", {"model": FIG1B})
        status, err = request(
            server, "POST", f"/sessions/{doc['id']}/decisions", {"var": "zz", "value": True}
        )
        assert status == 400
        assert err["error"] == "unknown_variable"

    def test_non_boolean_value_400(self, server):
        _, doc = request(server, "POST", "/sessions", {"model": FIG1B})
        status, err = request(
            server, "POST", f"/sessions/{doc['id']}/decisions", {"var": "a", "value": "yes"}
        )
        assert status == 400

    def test_missing_fields_400(self, server):
        _, doc = request(server, "POST", "/sessions", {"model": FIG1B})
        status, err = request(server, "POST", f"/sessions/{doc['id']}/decisions", {"var": "a"})
        assert status == 400


class TestUndo:
    def test_undo_user_decision(self, server):
        _, doc = request(server, "POST", "/sessions", {"model": FIG1B})
        sid = doc["id"]
        request(server, "POST", f"/sessions/{sid}/decisions", {"var": "a", "value": True})
        status, doc = request(server, "DELETE", f"/sessions/{sid}/decisions/a")
        assert status == 200
        vars_ = by_name(doc)
        assert vars_["a"]["status"] == "unassigned"
        assert vars_["b"]["status"] == "unassigned"

    def test_undo_inferred_409(self, server):
        _, doc = request(server, "POST", "/sessions", {"model": FIG1B})
        status, err = request(server, "DELETE", f"/sessions/{doc['id']}/decisions/x")
        assert status == 409
        assert err["error"] == "not_a_user_decision"


class TestCompletion:
    def test_shopping_on_uvxy_model(self, server):
        _, doc = request(server, "POST", "/sessions", {"model": UV_XY_MODEL})
        sid = doc["id"]
        status, doc = request(server, "POST", f"/sessions/{sid}/shopping-principle")
        assert status == 200
        vars_ = by_name(doc)
        assert vars_["x"]["status"] == "auto_false"
        assert vars_["y"]["status"] == "auto_false"
        assert vars_["u"]["highlighted"] is True
        assert vars_["v"]["highlighted"] is True
        assert doc["complete"] is False
        # choosing u then invoking the safe completion again finishes
        request(server, "POST", f"/sessions/{sid}/decisions", {"var": "u", "value": True})
        status, doc = request(server, "POST", f"/sessions/{sid}/shopping-principle")
        assert doc["complete"] is True

    def test_blind_complete(self, server):
        _, doc = request(server, "POST", "/sessions", {"model": FIG1B})
        sid = doc["id"]
        status, doc = request(server, "POST", f"/sessions/{sid}/complete")
        assert status == 200
        assert doc["complete"] is True
        for v in doc["variables"]:
            assert v["status"] != "unassigned"
            assert v["selectable_true"] is False and v["selectable_false"] is False


class TestReplayFidelity:
    def test_byte_identical_replay(self):
        script = [
            ("POST", "/sessions", {"model": FIG1B, "name": "fig1b"}),
            ("POST", "/sessions/{sid}/decisions", {"var": "a", "value": True}),
            ("POST", "/sessions/{sid}/decisions", {"var": "c", "value": True}),
            ("POST", "/sessions/{sid}/shopping-principle", None),
            ("DELETE", "/sessions/{sid}/decisions/a", None),
            ("POST", "/sessions/{sid}/complete", None),
        ]
        transcripts = []
        for _ in range(2):
            svc = ConfiguratorService(token_rng=random.Random(99))
            srv = make_server(svc, port=0)
            thread = threading.Thread(target=srv.serve_forever, daemon=True)
            thread.start()
            sid = None
            lines = []
            for method, path, body in script:
                status, doc = request(srv, method, path.format(sid=sid), body)
                if sid is None and isinstance(doc, dict):
                    sid = doc["id"]
                lines.append((status, json.dumps(doc, sort_keys=True)))
            srv.shutdown()
            srv.server_close()
            transcripts.append(lines)
        assert transcripts[0] == transcripts[1]


class TestStaticServing:
    def test_static_files(self, tmp_path):
        (tmp_path / "index.html").write_text("<html>ui</html>")
        svc = ConfiguratorService()
        srv = make_server(svc, port=0, static_dir=str(tmp_path))
        thread = threading.Thread(target=srv.serve_forever, daemon=True)
        thread.start()
        host, port = srv.server_address[:2]
        conn = HTTPConnection(host, port, timeout=10)
        conn.request("GET", "/")
        resp = conn.getresponse()
        body = resp.read().decode()
        conn.close()
        srv.shutdown()
        srv.server_close()
        assert resp.status == 200 and body == "<html>ui</html>"

    def test_traversal_blocked(self, tmp_path):
        (tmp_path / "index.html").write_text("ok")
        svc = ConfiguratorService()
        srv = make_server(svc, port=0, static_dir=str(tmp_path))
        thread = threading.Thread(target=srv.serve_forever, daemon=True)
        thread.start()
        host, port = srv.server_address[:2]
        conn = HTTPConnection(host, port, timeout=10)
        conn.request("GET", "/../etc/passwd")
        resp = conn.getresponse()
        resp.read()
        conn.close()
        srv.shutdown()
        srv.server_close()
        assert resp.status == 404


class TestSnapshot:
    def test_snapshot_roundtrip(self, tmp_path):
        svc = ConfiguratorService(token_rng=random.Random(1))
        doc = svc.create_session(FIG1B, "fig1b")
        svc.decide(doc["id"], "a", True)
        path = str(tmp_path / "snap.json")
        svc.save_snapshot(path)
        restored = ConfiguratorService()
        assert restored.load_snapshot(path) == 1
        again = restored.get_state(doc["id"])
        assert by_name(again)["a"]["status"] == "user_true"
        assert by_name(again)["b"]["status"] == "inferred_false"
