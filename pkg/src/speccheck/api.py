"""JSON-over-HTTP facade for sessions.

Sessions live server-side in memory and expire after an idle TTL. Requests
to the same session are serialized with a per-session lock, so concurrent
clients observe a consistent event order. Every mutating response carries
the refreshed session state; clients are expected to render from it rather
than keep local semantics.

Routes (all JSON):
  POST /v1/sessions                   {source, stepBudget?, depthBudget?}
  GET  /v1/sessions/{id}
  POST /v1/sessions/{id}/step
  POST /v1/sessions/{id}/oracle       {answer: bool}
  POST /v1/sessions/{id}/edit         {kind, text}
  POST /v1/sessions/{id}/choice       {branch: int}
  POST /v1/sessions/{id}/accuracy     {domain: <domain object>, earlyExit?}
  GET  /v1/sessions/{id}/log
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .domain import load_domain
from .engine import OracleQuery, Verdict
from .errors import (DomainTooLarge, SessionStateError, SpecCheckError,
                     ValidationFailed)
from .session import EDIT_KINDS, Session, Settings

DEFAULT_TTL_SECONDS = 24 * 3600


@dataclass
class _Entry:
    session: Session
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_used: float = field(default_factory=time.monotonic)


class _Store:
    def __init__(self, ttl_seconds, clock=time.monotonic):
        self.ttl = ttl_seconds
        self.clock = clock
        self.entries = {}
        self.guard = threading.Lock()

    def put(self, session: Session):
        with self.guard:
            self._sweep()
            self.entries[session.id] = _Entry(session, last_used=self.clock())

    def get(self, session_id) -> Optional[_Entry]:
        with self.guard:
            self._sweep()
            e = self.entries.get(session_id)
            if e is not None:
                e.last_used = self.clock()
            return e

    def _sweep(self):
        now = self.clock()
        dead = [k for k, e in self.entries.items()
                if now - e.last_used > self.ttl]
        for k in dead:
            del self.entries[k]


def _error(status, message, **extra):
    return JSONResponse({"error": message, **extra}, status_code=status)


def _step_result_json(result):
    if isinstance(result, Verdict):
        return {"type": "verdict", **result.to_json()}
    if isinstance(result, OracleQuery):
        return {"type": "oracleQuery", **result.to_json()}
    return {"type": "done", **result.to_json()}


def create_app(settings: Optional[Settings] = None,
               ttl_seconds: float = DEFAULT_TTL_SECONDS,
               clock=time.monotonic) -> FastAPI:
    app = FastAPI(title="speccheck", version="1")
    # the browser client is served from its own origin
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    store = _Store(ttl_seconds, clock)
    defaults = settings or Settings()

    def with_session(session_id, fn):
        entry = store.get(session_id)
        if entry is None:
            return _error(404, "no such session")
        with entry.lock:
            return fn(entry.session)

    @app.post("/v1/sessions", status_code=201)
    def create_session(body: dict):
        source = body.get("source")
        if not isinstance(source, str):
            return _error(400, "body needs a string 'source'")
        s = Settings(body.get("stepBudget", defaults.step_budget),
                     body.get("depthBudget", defaults.depth_budget))
        try:
            session = Session(source, s)
        except ValidationFailed as e:
            return _error(400, "validation failed",
                          diagnostics=[d.to_json() for d in e.diagnostics])
        except SpecCheckError as e:
            return _error(400, str(e))
        store.put(session)
        return {"id": session.id, "state": session.state_json()}

    @app.get("/v1/sessions/{session_id}")
    def get_session(session_id: str):
        return with_session(session_id, lambda s: s.state_json())

    @app.post("/v1/sessions/{session_id}/step")
    def step(session_id: str):
        def go(s: Session):
            try:
                result = s.step()
            except SessionStateError as e:
                return _error(409, str(e))
            return {"result": _step_result_json(result),
                    "state": s.state_json()}
        return with_session(session_id, go)

    @app.post("/v1/sessions/{session_id}/oracle")
    def oracle(session_id: str, body: dict):
        answer = body.get("answer")
        if not isinstance(answer, bool):
            return _error(400, "body needs a boolean 'answer'")

        def go(s: Session):
            try:
                v = s.answer_oracle(answer)
            except SessionStateError as e:
                return _error(409, str(e))
            return {"result": _step_result_json(v), "state": s.state_json()}
        return with_session(session_id, go)

    @app.post("/v1/sessions/{session_id}/edit")
    def edit(session_id: str, body: dict):
        kind = body.get("kind")
        text = body.get("text")
        if kind not in EDIT_KINDS:
            return _error(400, f"kind must be one of {', '.join(EDIT_KINDS)}")
        if not isinstance(text, str):
            return _error(400, "body needs a string 'text'")

        def go(s: Session):
            diags = s.apply_edit(kind, text)
            ok = not any(d.severity == "error" for d in diags)
            return {"ok": ok, "diagnostics": [d.to_json() for d in diags],
                    "state": s.state_json()}
        return with_session(session_id, go)

    @app.post("/v1/sessions/{session_id}/choice")
    def choice(session_id: str, body: dict):
        branch = body.get("branch")
        if not isinstance(branch, int) or isinstance(branch, bool):
            return _error(400, "body needs an integer 'branch'")

        def go(s: Session):
            try:
                chosen = s.choose(branch)
            except SessionStateError as e:
                return _error(409, str(e))
            return {"chosen": chosen.render(), "state": s.state_json()}
        return with_session(session_id, go)

    @app.post("/v1/sessions/{session_id}/accuracy")
    def accuracy(session_id: str, body: dict):
        domain_obj = body.get("domain")
        if not isinstance(domain_obj, dict):
            return _error(400, "body needs a 'domain' object")
        early = bool(body.get("earlyExit", False))

        def go(s: Session):
            try:
                domain = load_domain(domain_obj)
                report = s.run_accuracy(domain, early_exit=early)
            except DomainTooLarge as e:
                return _error(422, str(e), count=e.count, cap=e.cap)
            except SpecCheckError as e:
                return _error(400, str(e))
            return report.to_json()
        return with_session(session_id, go)

    @app.get("/v1/sessions/{session_id}/log")
    def log(session_id: str):
        return with_session(session_id, lambda s: {"events": s.events})

    return app
