"""HTTP + WebSocket surface over sessions.

Endpoints:
    POST /api/sessions                        create a session, start its worker
    GET  /api/sessions/{id}/snapshot          folded graph state + stylesheet
    GET  /api/sessions/{id}/nodes/{node_id}   detail panel payload
    WS   /api/sessions/{id}/events            full history from seq 0, then live

The WebSocket feed is event-sourced catch-up: a subscriber joining at any
point receives every event from seq 0 in order, with no gaps or duplicates,
because frames are read straight off the session's append-only log by index.
The socket closes normally once the session is finished and fully sent.

One pipeline worker thread per session is the single writer; HTTP handlers
only read (under the session lock, so they never observe a half-applied
tick).
"""
from __future__ import annotations

import asyncio
import threading
import time
from typing import Any, Optional

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from .ingest import TopicQuery
from .layout import LayoutParams
from .session import (
    Session,
    SessionConfig,
    SessionConfigError,
    SessionNotFound,
    NodeNotFound,
    SessionRegistry,
    bundled_corpus_path,
    wire_event_text,
)

WS_POLL_SECONDS = 0.02


class PipelineWorker(threading.Thread):
    """Drives one session's ticks until it finishes; the only writer."""

    def __init__(self, session: Session):
        super().__init__(daemon=True, name=f"plexus-{session.id}")
        self.session = session

    def run(self) -> None:
        while not self.session.finished:
            with self.session.lock:
                self.session.tick()
            if self.session.finished:
                break
            time.sleep(self.session.config.tick_interval)


def config_from_json(body: Any) -> SessionConfig:
    """Translate a POST /api/sessions body into a SessionConfig.

    Accepted shape (phrases are what the topic form submits; everything
    else optional)::

        {"topic_a": "iPhone 7", "topic_b": "Samsung S7",
         "source": "replay", "seed": 42,
         "corpus": "...", "lexicon": "...", "stylesheet": "...",
         "tick_interval": 1.0, "language": "en"}

    Replay with no corpus given falls back to the bundled demo corpus so a
    fresh checkout serves something out of the box.
    """
    if not isinstance(body, dict):
        raise SessionConfigError("request body must be a JSON object")
    known = {"topic_a", "topic_b", "source", "seed", "corpus", "lexicon",
             "stylesheet", "tick_interval", "language"}
    unknown = set(body) - known
    if unknown:
        raise SessionConfigError(f"unknown config fields: {', '.join(sorted(unknown))}")

    def text_field(key: str, default: Optional[str] = None, required: bool = False) -> Optional[str]:
        value = body.get(key, default)
        if value is None:
            if required:
                raise SessionConfigError(f"missing required field: {key}")
            return None
        if not isinstance(value, str):
            raise SessionConfigError(f"field {key} must be a string")
        return value

    phrase_a = text_field("topic_a", required=True)
    phrase_b = text_field("topic_b", required=True)
    language = text_field("language", "en")
    source = text_field("source", "replay")
    corpus = text_field("corpus")
    if source == "replay" and corpus is None:
        corpus = bundled_corpus_path()

    seed = body.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise SessionConfigError("seed must be an integer")
    tick_interval = body.get("tick_interval", 1.0)
    if isinstance(tick_interval, bool) or not isinstance(tick_interval, (int, float)):
        raise SessionConfigError("tick_interval must be a number")

    return SessionConfig(
        topic_a=TopicQuery("A", phrase_a, language=language),
        topic_b=TopicQuery("B", phrase_b, language=language),
        source=source,
        seed=seed,
        corpus_path=corpus,
        lexicon_path=text_field("lexicon"),
        stylesheet_path=text_field("stylesheet"),
        tick_interval=float(tick_interval),
    )


def create_app(registry: Optional[SessionRegistry] = None, *,
               bearer_token: Optional[str] = None,
               start_workers: bool = True) -> FastAPI:
    app = FastAPI(title="plexus", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.registry = registry if registry is not None else SessionRegistry()
    app.state.workers = {}

    def start_session(config: SessionConfig) -> Session:
        session = app.state.registry.create(config, bearer_token=bearer_token)
        if start_workers:
            worker = PipelineWorker(session)
            app.state.workers[session.id] = worker
            worker.start()
        return session

    app.state.start_session = start_session

    def not_found(message: str) -> JSONResponse:
        return JSONResponse({"error": message}, status_code=404)

    @app.post("/api/sessions")
    async def create_session(body: dict) -> JSONResponse:
        try:
            config = config_from_json(body)
            session = await asyncio.to_thread(start_session, config)
        except SessionConfigError as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        return JSONResponse({"session_id": session.id})

    @app.get("/api/sessions/{session_id}/snapshot")
    async def get_snapshot(session_id: str) -> JSONResponse:
        try:
            session = app.state.registry.get(session_id)
        except SessionNotFound:
            return not_found(f"no such session: {session_id}")
        with session.lock:
            return JSONResponse(session.snapshot_json())

    @app.get("/api/sessions/{session_id}/nodes/{node_id}")
    async def get_node(session_id: str, node_id: str) -> Response:
        try:
            session = app.state.registry.get(session_id)
        except SessionNotFound:
            return not_found(f"no such session: {session_id}")
        try:
            with session.lock:
                detail = session.node_detail_json(node_id)
        except NodeNotFound:
            return not_found(f"no such node: {node_id}")
        return Response(content=detail, media_type="application/json")

    @app.websocket("/api/sessions/{session_id}/events")
    async def events(websocket: WebSocket, session_id: str) -> None:
        await websocket.accept()
        try:
            session = app.state.registry.get(session_id)
        except SessionNotFound:
            await websocket.close(code=1008, reason=f"no such session: {session_id}")
            return
        sent = 0
        try:
            while True:
                log = session.log
                while sent < len(log):
                    await websocket.send_text(wire_event_text(session.id, log[sent]))
                    sent += 1
                if session.finished and sent == len(session.log):
                    break
                await asyncio.sleep(WS_POLL_SECONDS)
            await websocket.close(code=1000, reason="session finished")
        except WebSocketDisconnect:
            pass

    return app
