"""Privacy-filtering proxy: sanitize on ingress, recover on egress, audit locally.

Sessions carry the plaintext/ciphertext map across turns so a value keeps its
surrogate for the whole conversation. Maps and audit records live in an
embedded SQLite store on this host and are never transmitted upstream; the
service binds to loopback by default.

Requests within one session are serialized (the map is a growing shared
structure); different sessions proceed concurrently.
"""

from __future__ import annotations

import json
import sqlite3
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import yaml
from fastapi import FastAPI, Header, HTTPException
from pydantic import BaseModel

from . import llm
from .errors import (
    BackendTimeoutError,
    ConfigurationError,
    SessionNotFoundError,
    TransportError,
    UsageError,
)
from .llm import BackendConfig, ChatMessage
from .recovery import recover
from .sanitizer import (
    ClueKB,
    DetectorConfig,
    PrivacyType,
    SanitizerConfig,
    SurrogateMap,
    privacy_types,
    sanitize,
)

SESSION_HEADER = "X-PPTS-Session"


@dataclass
class TurnRecord:
    """Audit entry for one completed chat turn."""

    original_in: str
    sanitized_in: str
    raw_out: str
    restored_out: str
    conflicts_fixed: int
    turn_index: int

    def to_dict(self) -> dict:
        return {
            "original_in": self.original_in,
            "sanitized_in": self.sanitized_in,
            "raw_out": self.raw_out,
            "restored_out": self.restored_out,
            "conflicts_fixed": self.conflicts_fixed,
            "turn_index": self.turn_index,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TurnRecord":
        return cls(**data)


@dataclass
class Session:
    id: str
    enabled_types: list[str]
    mapping: SurrogateMap = field(default_factory=SurrogateMap)
    created_at: float = 0.0
    last_used: float = 0.0
    audit: list[TurnRecord] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "enabled_types": self.enabled_types,
            "mapping": self.mapping.to_records(),
            "created_at": self.created_at,
            "last_used": self.last_used,
            "audit": [t.to_dict() for t in self.audit],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Session":
        return cls(
            id=data["id"],
            enabled_types=list(data["enabled_types"]),
            mapping=SurrogateMap.from_records(data["mapping"]),
            created_at=data["created_at"],
            last_used=data["last_used"],
            audit=[TurnRecord.from_dict(t) for t in data["audit"]],
        )


class SessionStore:
    """Embedded key-value persistence for sessions (SQLite)."""

    def __init__(self, path: str = ":memory:"):
        self._conn = sqlite3.connect(path, check_same_thread=False)
        self._lock = threading.Lock()
        with self._lock:
            self._conn.execute(
                "CREATE TABLE IF NOT EXISTS sessions (id TEXT PRIMARY KEY, data TEXT NOT NULL)"
            )
            self._conn.commit()

    def load(self, session_id: str) -> Session | None:
        with self._lock:
            row = self._conn.execute(
                "SELECT data FROM sessions WHERE id = ?", (session_id,)
            ).fetchone()
        return Session.from_dict(json.loads(row[0])) if row else None

    def save(self, session: Session) -> None:
        payload = json.dumps(session.to_dict(), ensure_ascii=False)
        with self._lock:
            self._conn.execute(
                "INSERT INTO sessions (id, data) VALUES (?, ?) "
                "ON CONFLICT(id) DO UPDATE SET data = excluded.data",
                (session.id, payload),
            )
            self._conn.commit()

    def close(self) -> None:
        self._conn.close()


@dataclass
class GatewayConfig:
    host: str = "127.0.0.1"
    port: int = 8788
    seed: int = 42
    max_retries: int = 3
    types: list[str] = field(default_factory=lambda: ["name", "location"])
    sanitizer: SanitizerConfig | None = None
    kb: ClueKB | None = None
    backend: BackendConfig = field(default_factory=BackendConfig)
    store_path: str = ":memory:"
    sanitize_system: bool = False
    reasonability: bool = True

    @classmethod
    def from_yaml(cls, path: str | Path) -> "GatewayConfig":
        """Load a config file; relative resource paths resolve against its directory."""
        path = Path(path)
        try:
            raw = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
        except (OSError, yaml.YAMLError) as exc:
            raise ConfigurationError(f"cannot load config {path}: {exc}") from exc
        base = path.parent

        def resolve(p: str) -> Path:
            candidate = Path(p)
            return candidate if candidate.is_absolute() else base / candidate

        type_names = list(raw.get("types", ["name", "location"]))
        types = privacy_types(type_names)
        by_name = {t.name: t for t in types}

        detectors: dict[str, list[DetectorConfig]] = {}
        for tname, cfgs in (raw.get("detectors") or {}).items():
            if tname not in by_name:
                raise ConfigurationError(f"detector configured for unknown type {tname!r}")
            detectors[tname] = [
                DetectorConfig(c["kind"], resolve(c["resource"]), by_name[tname]) for c in cfgs
            ]
        pools: dict[str, list[str]] = {}
        for tname, pool_path in (raw.get("pools") or {}).items():
            from .sanitizer import load_wordlist

            pools[tname] = load_wordlist(resolve(pool_path))

        kb = ClueKB.load(resolve(raw["clue_kb"])) if raw.get("clue_kb") else ClueKB()

        backend_raw = raw.get("backend") or {}
        backend = BackendConfig(
            kind=backend_raw.get("kind", "mock-echo"),
            endpoint=backend_raw.get("endpoint"),
            model_id=backend_raw.get("model_id", ""),
            timeout=float(backend_raw.get("timeout", 30.0)),
            credential_env=backend_raw.get("credential_env", "LLM_API_KEY"),
        )

        listen = raw.get("listen") or {}
        return cls(
            host=listen.get("host", "127.0.0.1"),
            port=int(listen.get("port", 8788)),
            seed=int(raw.get("seed", 42)),
            max_retries=int(raw.get("max_retries", 3)),
            types=type_names,
            sanitizer=SanitizerConfig(detectors=detectors, pools=pools),
            kb=kb,
            backend=backend,
            store_path=raw.get("store", ":memory:"),
            sanitize_system=bool(raw.get("sanitize_system", False)),
            reasonability=bool(raw.get("reasonability", True)),
        )

    @classmethod
    def default(cls) -> "GatewayConfig":
        from .corpus import data_path

        return cls.from_yaml(data_path("default_config.yaml"))


class Gateway:
    """Session management plus the sanitize → complete → recover turn pipeline."""

    def __init__(self, config: GatewayConfig, completer: Callable | None = None):
        if config.sanitizer is None or config.kb is None:
            raise ConfigurationError("gateway config must carry sanitizer wiring and a clue KB")
        self.config = config
        self.store = SessionStore(config.store_path)
        self._complete = completer or llm.complete
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _session_lock(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(session_id, threading.Lock())

    def create_session(self, enabled_types: Sequence[str]) -> Session:
        known = set(self.config.types)
        for tname in enabled_types:
            if tname not in known:
                raise UsageError(f"unknown privacy type {tname!r}")
        now = time.time()
        session = Session(
            id=uuid.uuid4().hex,
            enabled_types=list(enabled_types),
            created_at=now,
            last_used=now,
        )
        self.store.save(session)
        return session

    def get_session(self, session_id: str) -> Session:
        session = self.store.load(session_id)
        if session is None:
            raise SessionNotFoundError(f"no session {session_id!r}")
        return session

    def get_mapping(self, session_id: str) -> SurrogateMap:
        return self.get_session(session_id).mapping

    def get_audit(self, session_id: str) -> list[TurnRecord]:
        return self.get_session(session_id).audit

    def _types_for(self, session: Session) -> list[PrivacyType]:
        ordered = [t for t in self.config.types if t in session.enabled_types]
        return privacy_types(ordered)

    def handle_chat(self, session_id: str, messages: Sequence[ChatMessage]) -> tuple[str, TurnRecord]:
        """Sanitize the conversation, call the backend, restore the reply.

        User content is always sanitized. Assistant history is re-sanitized as
        well: the client holds restored text, which would otherwise carry the
        plaintext values straight back upstream. System content is left alone
        unless configured otherwise.
        """
        if not messages or messages[-1].role != "user":
            raise UsageError("last message must have the user role")
        with self._session_lock(session_id):
            session = self.get_session(session_id)
            types = self._types_for(session)
            mapping = session.mapping.copy()
            conflicts_fixed = 0
            original_in = messages[-1].content
            sanitized_in = original_in

            outgoing: list[ChatMessage] = []
            for msg in messages:
                wants = msg.role in ("user", "assistant") or (
                    msg.role == "system" and self.config.sanitize_system
                )
                if wants and types:
                    outcome = sanitize(
                        msg.content,
                        types,
                        self.config.sanitizer,
                        self.config.kb,
                        self.config.seed,
                        self.config.max_retries,
                        reasonability=self.config.reasonability,
                        initial_map=mapping,
                    )
                    mapping = outcome.mapping
                    conflicts_fixed += len(outcome.fixes_applied)
                    content = outcome.sanitized
                else:
                    content = msg.content
                outgoing.append(ChatMessage(msg.role, content))
            sanitized_in = outgoing[-1].content

            raw_out = self._complete(outgoing, self.config.backend)

            restored = recover(raw_out, mapping)
            turn = TurnRecord(
                original_in=original_in,
                sanitized_in=sanitized_in,
                raw_out=raw_out,
                restored_out=restored.text,
                conflicts_fixed=conflicts_fixed,
                turn_index=len(session.audit),
            )
            session.mapping = mapping
            session.audit.append(turn)
            session.last_used = time.time()
            self.store.save(session)
            return restored.text, turn


class WireMessage(BaseModel):
    role: str
    content: str


class ChatRequest(BaseModel, extra="allow"):
    model: str = ""
    messages: list[WireMessage]


class SessionRequest(BaseModel):
    types: list[str]


def create_app(gateway: Gateway) -> FastAPI:
    """FastAPI application exposing the provider-compatible chat endpoint."""
    app = FastAPI(title="ppts gateway")

    @app.post("/ppts/sessions")
    def create_session(body: SessionRequest):
        try:
            session = gateway.create_session(body.types)
        except UsageError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"id": session.id, "types": session.enabled_types}

    @app.get("/ppts/sessions/{session_id}/mapping")
    def get_mapping(session_id: str):
        try:
            mapping = gateway.get_mapping(session_id)
        except SessionNotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return {"entries": mapping.to_records()}

    @app.get("/ppts/sessions/{session_id}/audit")
    def get_audit(session_id: str):
        try:
            audit = gateway.get_audit(session_id)
        except SessionNotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return {"turns": [t.to_dict() for t in audit]}

    @app.post("/v1/chat/completions")
    def chat_completions(
        body: ChatRequest,
        x_ppts_session: str | None = Header(default=None, alias=SESSION_HEADER),
    ):
        if not x_ppts_session:
            raise HTTPException(status_code=400, detail=f"missing {SESSION_HEADER} header")
        try:
            messages = [ChatMessage(m.role, m.content) for m in body.messages]
            restored, turn = gateway.handle_chat(x_ppts_session, messages)
        except SessionNotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except UsageError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except (TransportError, BackendTimeoutError) as exc:
            raise HTTPException(status_code=502, detail=str(exc))
        return {
            "id": f"ppts-{uuid.uuid4().hex}",
            "object": "chat.completion",
            "created": int(time.time()),
            "model": body.model or gateway.config.backend.model_id or "ppts",
            "choices": [
                {
                    "index": 0,
                    "message": {"role": "assistant", "content": restored},
                    "finish_reason": "stop",
                }
            ],
            "ppts": {"session": x_ppts_session, "turn_index": turn.turn_index},
        }

    return app


def serve(config: GatewayConfig) -> None:
    """Run the gateway until signaled."""
    import uvicorn

    app = create_app(Gateway(config))
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
