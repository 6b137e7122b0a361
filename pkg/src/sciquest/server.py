"""Wire protocol for driving sessions remotely.

Two transports share one synchronous ProtocolHandler: a FastAPI WebSocket
endpoint (for the browser UI) and a newline-delimited-JSON TCP listener
(for headless agents). Keeping the handler transport-free is what makes
the remote-equals-in-process property directly testable.

Message envelope, both directions:
    {"kind": ..., "session_token": ..., "payload": {...}}

Protocol errors come back as {"kind": "error", "code", "detail"}; malformed
input never takes the service down.
"""

from __future__ import annotations

import asyncio
import itertools
import json
import os
from typing import Any, Iterable, Optional

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from . import ENGINE_VERSION, PROTOCOL_VERSION, session as sess, tasks

CLIENT_KINDS = ("hello", "list_tasks", "start", "observe", "act", "frame", "bye")


def _error(code: str, detail: str, token: Optional[str] = None) -> dict:
    msg: dict[str, Any] = {"kind": "error", "code": code, "detail": detail}
    if token is not None:
        msg["session_token"] = token
    return msg


def _code_of(exc: ValueError) -> str:
    # engine errors carry "CODE: detail" messages
    text = str(exc)
    return text.split(":", 1)[0].strip() if ":" in text else "BAD_REQUEST"


class ProtocolHandler:
    """One handler serves many sessions; per-session order is the caller's
    arrival order (each transport feeds messages sequentially)."""

    def __init__(self, log_dir: Optional[str] = None):
        self.log_dir = log_dir
        self.sessions: dict[str, sess.Session] = {}
        self.notes: dict[str, str] = {}
        self._tokens = itertools.count(1)

    # -- transport entry points ------------------------------------------

    def handle_line(self, text: str, owned: Optional[set] = None) -> list[dict]:
        try:
            msg = json.loads(text)
        except (json.JSONDecodeError, UnicodeDecodeError):
            return [_error("BAD_JSON", "message is not valid JSON")]
        if not isinstance(msg, dict):
            return [_error("BAD_JSON", "message must be a JSON object")]
        return self.handle(msg, owned)

    def handle(self, msg: dict, owned: Optional[set] = None) -> list[dict]:
        kind = msg.get("kind")
        if kind not in CLIENT_KINDS:
            return [_error("BAD_KIND", f"unknown message kind {kind!r}")]
        try:
            return getattr(self, f"_on_{kind}")(msg, owned if owned is not None else set())
        except ValueError as exc:
            return [_error(_code_of(exc), str(exc), msg.get("session_token"))]
        except Exception as exc:  # totality at the wire boundary
            return [_error("INTERNAL", f"{type(exc).__name__}: {exc}", msg.get("session_token"))]

    def finalize(self, token: str) -> Optional[str]:
        """Abort if still running and flush the log file. Returns log path."""
        session = self.sessions.get(token)
        if session is None:
            return None
        sess.abort(session)
        if self.log_dir:
            path = os.path.join(self.log_dir, f"{token}.jsonl")
            sess.write_log(session, path)
            return path
        return None

    # -- message handlers -------------------------------------------------

    def _on_hello(self, msg: dict, owned: set) -> list[dict]:
        payload = msg.get("payload") or {}
        if "version" not in payload:
            return [_error("MISSING_VERSION", "hello payload must carry a version field")]
        if payload["version"] != PROTOCOL_VERSION:
            return [
                _error(
                    "VERSION_MISMATCH",
                    f"client speaks {payload['version']!r}, server speaks {PROTOCOL_VERSION!r}",
                )
            ]
        return [
            {
                "kind": "hello",
                "payload": {
                    "version": PROTOCOL_VERSION,
                    "engine_version": ENGINE_VERSION,
                    "benchmark": tasks.list_benchmark(),
                },
            }
        ]

    def _on_list_tasks(self, msg: dict, owned: set) -> list[dict]:
        return [{"kind": "list_tasks", "payload": tasks.list_benchmark()}]

    def _on_start(self, msg: dict, owned: set) -> list[dict]:
        payload = msg.get("payload") or {}
        task_id = payload.get("task_id", "")
        session = sess.start(task_id, payload.get("config"))
        token = f"s{next(self._tokens)}"
        self.sessions[token] = session
        owned.add(token)
        return [
            {
                "kind": "start",
                "session_token": token,
                "payload": {
                    "task_id": session.task.task_id,
                    "step_cap": session.task.step_cap,
                    "description": session.task.description,
                    "observation": sess.observation(session),
                },
            }
        ]

    def _session(self, msg: dict) -> tuple[str, sess.Session]:
        token = msg.get("session_token")
        session = self.sessions.get(token)
        if session is None:
            raise ValueError(f"UNKNOWN_SESSION: {token!r}")
        return token, session

    def _on_observe(self, msg: dict, owned: set) -> list[dict]:
        token, session = self._session(msg)
        return [
            {
                "kind": "observe",
                "session_token": token,
                "payload": {
                    "observation": sess.observation(session),
                    "valid_actions": sess.valid_requests(session),
                },
            }
        ]

    def _on_frame(self, msg: dict, owned: set) -> list[dict]:
        token, session = self._session(msg)
        return [{"kind": "frame", "session_token": token, "payload": sess.tile_frame(session)}]

    def _on_act(self, msg: dict, owned: set) -> list[dict]:
        token, session = self._session(msg)
        payload = msg.get("payload") or {}
        out = sess.step(session, payload)
        replies = [
            {
                "kind": "score",
                "session_token": token,
                "payload": {
                    "observation": out["observation"],
                    "result": out["result"],
                    "score": out["score"],
                    "done": out["done"],
                },
            }
        ]
        if out["done"]:
            from .scoring import export_scorecard

            log_path = self.finalize(token)
            done_payload: dict[str, Any] = {
                "status": session.status,
                "scorecard": export_scorecard(session.scorecard),
            }
            if log_path:
                done_payload["log_path"] = log_path
            replies.append({"kind": "done", "session_token": token, "payload": done_payload})
        return replies

    def _on_bye(self, msg: dict, owned: set) -> list[dict]:
        token, session = self._session(msg)
        payload = msg.get("payload") or {}
        notes = payload.get("notes")
        if isinstance(notes, str) and notes:
            self.notes[token] = notes
        log_path = self.finalize(token)
        owned.discard(token)
        reply: dict[str, Any] = {
            "kind": "bye",
            "session_token": token,
            "payload": {"status": session.status, "notes_received": token in self.notes},
        }
        if log_path:
            reply["payload"]["log_path"] = log_path
            if token in self.notes:
                # notes persist beside the log so the grade CLI can pick
                # them up after the server is gone
                notes_path = os.path.join(self.log_dir, f"{token}.notes.txt")
                with open(notes_path, "w", encoding="utf-8") as fh:
                    fh.write(self.notes[token])
                reply["payload"]["notes_path"] = notes_path
        return [reply]


# ---------------------------------------------------------------------------
# transports

def build_app(log_dir: Optional[str] = None):
    """FastAPI app exposing the protocol at /ws. One handler per app."""
    app = FastAPI(title="tile-world session server")
    handler = ProtocolHandler(log_dir=log_dir)
    app.state.handler = handler

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        await ws.accept()
        owned: set = set()
        try:
            while True:
                text = await ws.receive_text()
                for reply in handler.handle_line(text, owned):
                    await ws.send_text(json.dumps(reply))
        except WebSocketDisconnect:
            pass
        finally:
            for token in list(owned):
                handler.finalize(token)

    @app.get("/healthz")
    async def healthz():
        return {"engine_version": ENGINE_VERSION, "protocol": PROTOCOL_VERSION}

    return app


async def serve_ndjson(handler: ProtocolHandler, host: str, port: int):
    """Newline-delimited-JSON TCP fallback for headless agents."""

    async def on_connection(reader: asyncio.StreamReader, writer: asyncio.StreamWriter):
        owned: set = set()
        try:
            while True:
                line = await reader.readline()
                if not line:
                    break
                if not line.strip():
                    continue
                for reply in handler.handle_line(line.decode("utf-8", "replace"), owned):
                    writer.write((json.dumps(reply) + "\n").encode("utf-8"))
                await writer.drain()
        finally:
            for token in list(owned):
                handler.finalize(token)
            writer.close()

    return await asyncio.start_server(on_connection, host, port)


def parse_bind(bind_address: str) -> tuple[str, int]:
    host, _, port = bind_address.rpartition(":")
    if not host or not port.isdigit():
        raise ValueError(f"BAD_BIND: expected host:port, got {bind_address!r}")
    return host, int(port)


def serve(bind_address: str, log_dir: Optional[str] = None, ndjson_port: Optional[int] = None):
    """Run the WebSocket server (and the NDJSON fallback on port+1)."""
    import uvicorn

    host, port = parse_bind(bind_address)
    app = build_app(log_dir=log_dir)
    handler: ProtocolHandler = app.state.handler
    tcp_port = ndjson_port if ndjson_port is not None else port + 1

    async def main():
        tcp = await serve_ndjson(handler, host, tcp_port)
        config = uvicorn.Config(app, host=host, port=port, log_level="warning")
        server = uvicorn.Server(config)
        try:
            await server.serve()
        finally:
            tcp.close()
            await tcp.wait_closed()

    asyncio.run(main())
