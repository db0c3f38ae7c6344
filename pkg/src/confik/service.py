"""HTTP/JSON session service over the configuration engine.

Endpoints (all bodies and responses are ``application/json``):

- ``POST   /sessions``                         create from model text
- ``GET    /sessions/{id}``                    current state
- ``POST   /sessions/{id}/decisions``          ``{"var": name, "value": bool}``
- ``DELETE /sessions/{id}/decisions/{var}``    retract a user decision
- ``POST   /sessions/{id}/shopping-principle`` safe completion
- ``POST   /sessions/{id}/complete``           blind completion

Every mutation returns the full session document.  Rejected operations map to
409 with a machine-readable reason, unknown sessions to 404, malformed bodies
to 400, and models that parse but admit no products to 422.  Requests for
distinct sessions run concurrently; one session's requests serialize on a
per-session lock.  Anything that is not an API route is served from the
static directory, which is where the built web UI lives.
"""

from __future__ import annotations

import json
import mimetypes
import os
import re
import secrets
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Optional

from . import engine
from .errors import (
    AlreadyAssigned,
    ConfikError,
    InconsistentDecision,
    ModelSyntaxError,
    NotAUserDecision,
    UnsatModel,
)
from .logic import ClauseSet, solve_raw, to_cnf
from .model import FeatureModel, parse_model, print_model, translate

__all__ = ["ApiError", "ConfiguratorService", "make_server", "run_server"]

_MAX_BODY = 1 << 20


class ApiError(ConfikError):
    def __init__(self, status: int, code: str, detail: str):
        super().__init__(detail)
        self.status = status
        self.code = code
        self.detail = detail


@dataclass
class _Entry:
    sid: str
    name: str
    fm: FeatureModel
    cs: ClauseSet
    session: engine.Session
    lock: threading.Lock = field(default_factory=threading.Lock)


class ConfiguratorService:
    """In-memory session store with the engine behind it."""

    def __init__(
        self,
        default_model: Optional[str] = None,
        default_name: str = "model",
        token_rng=None,
    ):
        self._sessions: dict[str, _Entry] = {}
        self._lock = threading.Lock()
        self._default_model = default_model
        self._default_name = default_name
        self._token_rng = token_rng

    def _new_token(self) -> str:
        if self._token_rng is not None:
            return f"{self._token_rng.getrandbits(128):032x}"
        return secrets.token_hex(16)

    # -- operations ---------------------------------------------------------

    def create_session(self, model_text: Optional[str], name: Optional[str]) -> dict:
        if model_text is None:
            model_text = self._default_model
            name = name or self._default_name
        if model_text is None:
            raise ApiError(400, "missing_model", "no model text given and no default model configured")
        if not isinstance(model_text, str):
            raise ApiError(400, "malformed_body", "'model' must be a string")
        name = name or "model"
        try:
            fm = parse_model(model_text)
        except ModelSyntaxError as exc:
            raise ApiError(422, "invalid_model", str(exc)) from exc
        cs = to_cnf(translate(fm), fm.var_table)
        try:
            session = engine.new_session(cs)
        except UnsatModel as exc:
            raise ApiError(422, "unsatisfiable_model", str(exc)) from exc
        with self._lock:
            sid = self._new_token()
            entry = _Entry(sid=sid, name=name, fm=fm, cs=cs, session=session)
            self._sessions[sid] = entry
        with entry.lock:
            return _document(entry)

    def _entry(self, sid: str) -> _Entry:
        with self._lock:
            entry = self._sessions.get(sid)
        if entry is None:
            raise ApiError(404, "unknown_session", f"no session {sid!r}")
        return entry

    def get_state(self, sid: str) -> dict:
        entry = self._entry(sid)
        with entry.lock:
            return _document(entry)

    def _var_id(self, entry: _Entry, var: str) -> int:
        table = entry.cs.var_table
        if not isinstance(var, str) or var not in table:
            raise ApiError(400, "unknown_variable", f"no variable named {var!r}")
        return table.id_of(var)

    def decide(self, sid: str, var: str, value) -> dict:
        entry = self._entry(sid)
        if not isinstance(value, bool):
            raise ApiError(400, "malformed_body", "'value' must be a boolean")
        with entry.lock:
            vid = self._var_id(entry, var)
            try:
                entry.session = engine.apply_decision(entry.session, vid, value)
            except AlreadyAssigned as exc:
                raise ApiError(409, "already_assigned", str(exc)) from exc
            except InconsistentDecision as exc:
                raise ApiError(409, "inconsistent_decision", str(exc)) from exc
            return _document(entry)

    def undo(self, sid: str, var: str) -> dict:
        entry = self._entry(sid)
        with entry.lock:
            vid = self._var_id(entry, var)
            try:
                entry.session = engine.retract(entry.session, vid)
            except NotAUserDecision as exc:
                raise ApiError(409, "not_a_user_decision", str(exc)) from exc
            return _document(entry)

    def shopping(self, sid: str) -> dict:
        entry = self._entry(sid)
        with entry.lock:
            entry.session = engine.shopping_principle(entry.session)
            return _document(entry)

    def blind_complete(self, sid: str) -> dict:
        entry = self._entry(sid)
        with entry.lock:
            entry.session = engine.complete_blind(entry.session)
            return _document(entry)

    # -- snapshots ----------------------------------------------------------

    def save_snapshot(self, path: str) -> None:
        with self._lock:
            entries = list(self._sessions.values())
        payload = []
        for entry in entries:
            with entry.lock:
                payload.append(
                    {
                        "id": entry.sid,
                        "name": entry.name,
                        "model": _model_text(entry),
                        "script": engine.export_script(entry.session),
                    }
                )
        with open(path, "w", encoding="utf-8") as fh:
            json.dump({"sessions": payload}, fh, indent=2)

    def load_snapshot(self, path: str) -> int:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        restored = 0
        for item in data.get("sessions", []):
            fm = parse_model(item["model"])
            cs = to_cnf(translate(fm), fm.var_table)
            session = engine.replay_script(cs, item.get("script", ""))
            entry = _Entry(
                sid=item["id"], name=item.get("name", "model"), fm=fm, cs=cs, session=session
            )
            with self._lock:
                self._sessions[entry.sid] = entry
            restored += 1
        return restored


def _model_text(entry: _Entry) -> str:
    return print_model(entry.fm)


def _document(entry: _Entry) -> dict:
    """Serialize engine state; field names and order are part of the contract."""
    session = entry.session
    cs = entry.cs
    table = cs.var_table
    status = session.var_status()
    fixed = session.decision_elits()
    variables = []
    for vid in table.user_ids():
        assigned = status[vid] != "unassigned"
        if assigned:
            sel_true = sel_false = False
        else:
            sel_true = solve_raw(cs, fixed + [vid << 1]) is not None
            sel_false = solve_raw(cs, fixed + [(vid << 1) | 1]) is not None
        variables.append(
            {
                "name": table.name_of(vid),
                "status": status[vid],
                "highlighted": vid in session.highlight,
                "selectable_true": sel_true,
                "selectable_false": sel_false,
            }
        )
    return {
        "id": entry.sid,
        "model_name": entry.name,
        "variables": variables,
        "complete": engine.is_complete(session),
        "tree": _tree(entry.fm, entry.fm.root),
    }


def _tree(fm: FeatureModel, fid: int) -> dict:
    feature = fm.features[fid]
    node = {
        "name": feature.name,
        "kind": feature.kind,
        "group": None
        if feature.group is None
        else {"index": feature.group, "kind": fm.groups[feature.group].kind},
        "children": [_tree(fm, cid) for cid in fm.children_of(fid)],
    }
    return node


# ---------------------------------------------------------------------------
# HTTP plumbing

_ROUTES = {
    "create": re.compile(r"^/sessions$"),
    "state": re.compile(r"^/sessions/([0-9a-f]+)$"),
    "decisions": re.compile(r"^/sessions/([0-9a-f]+)/decisions$"),
    "undo": re.compile(r"^/sessions/([0-9a-f]+)/decisions/([^/]+)$"),
    "shopping": re.compile(r"^/sessions/([0-9a-f]+)/shopping-principle$"),
    "complete": re.compile(r"^/sessions/([0-9a-f]+)/complete$"),
}


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    server_version = "confik"

    @property
    def service(self) -> ConfiguratorService:
        return self.server.service  # type: ignore[attr-defined]

    def log_message(self, fmt, *args):  # quiet by default
        if os.environ.get("CONFIK_HTTP_LOG"):
            super().log_message(fmt, *args)

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _read_json(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        if length > _MAX_BODY:
            raise ApiError(400, "malformed_body", "request body too large")
        raw = self.rfile.read(length) if length else b""
        if not raw:
            return {}
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ApiError(400, "malformed_body", f"invalid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ApiError(400, "malformed_body", "body must be a JSON object")
        return data

    def _dispatch(self, fn) -> None:
        try:
            self._send_json(200, fn())
        except ApiError as exc:
            self._send_json(exc.status, {"error": exc.code, "detail": exc.detail})

    def do_POST(self):
        if _ROUTES["create"].match(self.path):
            def create():
                body = self._read_json()
                return self.service.create_session(body.get("model"), body.get("name"))

            return self._dispatch(create)
        m = _ROUTES["decisions"].match(self.path)
        if m:
            def decide():
                body = self._read_json()
                if "var" not in body or "value" not in body:
                    raise ApiError(400, "malformed_body", "body needs 'var' and 'value'")
                return self.service.decide(m.group(1), body["var"], body["value"])

            return self._dispatch(decide)
        m = _ROUTES["shopping"].match(self.path)
        if m:
            return self._dispatch(lambda: self.service.shopping(m.group(1)))
        m = _ROUTES["complete"].match(self.path)
        if m:
            return self._dispatch(lambda: self.service.blind_complete(m.group(1)))
        self._send_json(404, {"error": "not_found", "detail": f"no route {self.path!r}"})

    def do_DELETE(self):
        m = _ROUTES["undo"].match(self.path)
        if m:
            return self._dispatch(lambda: self.service.undo(m.group(1), m.group(2)))
        self._send_json(404, {"error": "not_found", "detail": f"no route {self.path!r}"})

    def do_GET(self):
        m = _ROUTES["state"].match(self.path)
        if m:
            return self._dispatch(lambda: self.service.get_state(m.group(1)))
        self._serve_static()

    def _serve_static(self):
        static_dir = getattr(self.server, "static_dir", None)
        if not static_dir:
            self._send_json(404, {"error": "not_found", "detail": "no static content configured"})
            return
        rel = self.path.split("?", 1)[0].lstrip("/") or "index.html"
        target = os.path.realpath(os.path.join(static_dir, rel))
        root = os.path.realpath(static_dir)
        if not target.startswith(root + os.sep) and target != root:
            self._send_json(404, {"error": "not_found", "detail": "outside static root"})
            return
        if os.path.isdir(target):
            target = os.path.join(target, "index.html")
        if not os.path.isfile(target):
            self._send_json(404, {"error": "not_found", "detail": f"no file {rel!r}"})
            return
        ctype = mimetypes.guess_type(target)[0] or "application/octet-stream"
        with open(target, "rb") as fh:
            body = fh.read()
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


def make_server(
    service: ConfiguratorService,
    host: str = "127.0.0.1",
    port: int = 0,
    static_dir: Optional[str] = None,
) -> ThreadingHTTPServer:
    server = ThreadingHTTPServer((host, port), _Handler)
    server.daemon_threads = True
    server.service = service  # type: ignore[attr-defined]
    server.static_dir = static_dir  # type: ignore[attr-defined]
    return server


def run_server(server: ThreadingHTTPServer, snapshot_path: Optional[str] = None) -> None:
    """Serve until interrupted; optionally snapshot sessions on the way out."""
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        if snapshot_path:
            server.service.save_snapshot(snapshot_path)  # type: ignore[attr-defined]
        server.server_close()
