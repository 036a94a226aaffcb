"""Live session service: one engine per connection, line-delimited JSON messages.

The same message bodies travel over two transports: newline-framed JSON on
a plain TCP stream (trivially scriptable) and one-message-per-frame on a
WebSocket for browser clients.  Per-connection handling is serialized, so
engine calls never interleave within a session.
"""
from __future__ import annotations

import asyncio
import json
import logging
import os
import time
from dataclasses import replace
from typing import Iterable

from .engine import (
    CharacterCommitted,
    CharacterDeleted,
    DeletionSource,
    EngineConfig,
    Hand,
    HighlightChanged,
    PressureEngine,
    PressureSample,
    RemapConfig,
)
from .layout import LayoutConfig, render_text
from .trace import CharacterRecord, RecordAssembler, SessionLog, write_session
from .wire import dumps, q9

log = logging.getLogger(__name__)

PROTOCOL_VERSION = 1

_SCALAR_OVERRIDES = (
    "remap_lo",
    "remap_hi",
    "buffer_size",
    "nominal_rate",
    "hold_delete_delay",
    "hold_delete_rate",
    "hold_threshold",
)


class CloseConnection(Exception):
    """Raised after a fatal protocol error; responses are already queued."""


def apply_overrides(cfg: EngineConfig, overrides: dict) -> EngineConfig:
    """Engine config with client-requested overrides applied."""
    unknown = set(overrides) - set(_SCALAR_OVERRIDES) - {"layout"}
    if unknown:
        raise ValueError(f"unknown config fields: {sorted(unknown)}")
    remap = cfg.remap
    if "remap_lo" in overrides or "remap_hi" in overrides:
        remap = RemapConfig(
            lo=float(overrides.get("remap_lo", remap.lo)),
            hi=float(overrides.get("remap_hi", remap.hi)),
        )
    layout = cfg.layout
    if "layout" in overrides:
        layout = LayoutConfig(tuple(overrides["layout"]))
    return EngineConfig(
        layout=layout,
        remap=remap,
        buffer_size=int(overrides.get("buffer_size", cfg.buffer_size)),
        nominal_rate=float(overrides.get("nominal_rate", cfg.nominal_rate)),
        hold_delete_delay=float(overrides.get("hold_delete_delay", cfg.hold_delete_delay)),
        hold_delete_rate=float(overrides.get("hold_delete_rate", cfg.hold_delete_rate)),
        hold_threshold=(
            float(overrides["hold_threshold"]) if "hold_threshold" in overrides else cfg.hold_threshold
        ),
    )


def config_message_body(cfg: EngineConfig) -> dict:
    return {
        "remap_lo": cfg.remap.lo,
        "remap_hi": cfg.remap.hi,
        "buffer_size": cfg.buffer_size,
        "nominal_rate": cfg.nominal_rate,
        "hold_delete_delay": cfg.hold_delete_delay,
        "hold_delete_rate": cfg.hold_delete_rate,
        "hold_threshold": cfg.hold_threshold,
    }


class SessionConnection:
    """Transport-agnostic message handler for one client session.

    ``handle_line`` maps one inbound message to the ordered outbound
    messages it produces; raising :class:`CloseConnection` tells the
    transport to drop the client after flushing.
    """

    def __init__(self, default_config: EngineConfig, log_dir: str | None = None):
        self.default_config = default_config
        self.log_dir = log_dir
        self.engine: PressureEngine | None = None
        self.assembler: RecordAssembler | None = None
        self.records: list[CharacterRecord] = []
        self.session_started = time.strftime("%Y-%m-%dT%H:%M:%S")

    def handle_line(self, line: str) -> list[str]:
        try:
            msg = json.loads(line)
        except json.JSONDecodeError:
            return self._fatal("malformed", "message is not valid JSON")
        if not isinstance(msg, dict) or "type" not in msg:
            return self._fatal("malformed", "message must be an object with a 'type'")
        kind = msg["type"]
        if self.engine is None and kind != "hello":
            return self._fatal("protocol", "first message must be 'hello'")
        if kind == "hello":
            return self._on_hello(msg)
        if kind == "sample":
            return self._on_sample(msg)
        if kind == "reset":
            return self._on_reset()
        if kind == "end_session":
            return self._on_end()
        return self._fatal("malformed", f"unknown message type {kind!r}")

    def _fatal(self, code: str, detail: str) -> list[str]:
        raise CloseConnection([_error(code, detail)])

    def _on_hello(self, msg: dict) -> list[str]:
        if self.engine is not None:
            return self._fatal("protocol", "duplicate hello")
        version = msg.get("protocol_version")
        if version != PROTOCOL_VERSION:
            return self._fatal("protocol", f"unsupported protocol_version {version!r}")
        try:
            cfg = apply_overrides(self.default_config, msg.get("config") or {})
        except (TypeError, ValueError) as exc:
            return self._fatal("config", str(exc))
        self.engine = PressureEngine(cfg)
        self.assembler = RecordAssembler(cfg.layout)
        return [
            dumps(
                {
                    "type": "welcome",
                    "protocol_version": PROTOCOL_VERSION,
                    "config": config_message_body(cfg),
                    "layout": list(cfg.layout.characters),
                }
            )
        ]

    def _on_sample(self, msg: dict) -> list[str]:
        try:
            # snapped to wire precision on ingestion, like replay()
            sample = PressureSample(
                t=q9(float(msg["t"])), raw=q9(float(msg["raw"])), hand=Hand(msg.get("hand", "R"))
            )
        except (KeyError, TypeError, ValueError):
            return self._fatal("malformed", "sample needs numeric 't', 'raw' and hand 'L'/'R'")
        if not 0.0 <= sample.raw <= 1.0:
            return self._fatal("malformed", f"raw {sample.raw!r} outside [0, 1]")
        text_before = list(self.engine.state.text)
        try:
            events = self.engine.step(sample)
        except ValueError as exc:
            # timestamp regression: report it but keep the session alive
            return [_error("timestamp", str(exc))]
        completed = self.assembler.feed(sample, events)
        self.records.extend(completed)
        closing = next((r for r in completed if r.source != DeletionSource.HOLD_REPEAT.value), None)

        out: list[str] = []
        for ev in events:
            if isinstance(ev, HighlightChanged):
                out.append(
                    dumps({"type": "highlight", "index": ev.index, "buffered": ev.buffered_pressure})
                )
            elif isinstance(ev, CharacterCommitted):
                out.append(
                    dumps(
                        {
                            "type": "committed",
                            "symbol": ev.symbol,
                            "selection_pressure": ev.selection_pressure,
                            "duration_s": ev.duration_s,
                        }
                    )
                )
                if closing is not None:
                    out.append(_graph(closing.samples))
            elif isinstance(ev, CharacterDeleted):
                out.append(dumps({"type": "deleted", "source": ev.source.value}))
                if ev.source is DeletionSource.COMMIT and closing is not None:
                    out.append(_graph(closing.samples))
        if self.engine.state.text != text_before:
            out.append(dumps({"type": "text", "text": render_text(self.engine.state.text)}))
        return out

    def _on_reset(self) -> list[str]:
        had_text = bool(self.engine.state.text)
        self.engine.reset()
        self.assembler.reset()
        if had_text:
            return [dumps({"type": "text", "text": ""})]
        return []

    def _on_end(self) -> list[str]:
        if self.log_dir and self.records:
            path = os.path.join(
                self.log_dir, f"session-{self.session_started}-{id(self):x}.jsonl"
            )
            session = SessionLog(
                config=self.engine.config, records=self.records, created_at=self.session_started
            )
            with open(path, "w", encoding="utf-8") as fp:
                write_session(session, fp)
            log.info("session log written to %s", path)
        raise CloseConnection([])


def _error(code: str, detail: str) -> str:
    return dumps({"type": "error", "code": code, "detail": detail})


def _graph(samples: Iterable[tuple[float, float]]) -> str:
    return dumps({"type": "graph", "samples": [[t, raw] for t, raw in samples]})


async def _tcp_handler(
    reader: asyncio.StreamReader,
    writer: asyncio.StreamWriter,
    default_config: EngineConfig,
    log_dir: str | None,
) -> None:
    conn = SessionConnection(default_config, log_dir)
    try:
        while True:
            line = await reader.readline()
            if not line:
                break
            text = line.decode("utf-8").strip()
            if not text:
                continue
            try:
                responses = conn.handle_line(text)
            except CloseConnection as closing:
                for out in closing.args[0]:
                    writer.write(out.encode("utf-8") + b"\n")
                await writer.drain()
                break
            for out in responses:
                writer.write(out.encode("utf-8") + b"\n")
            await writer.drain()
    except (ConnectionResetError, asyncio.IncompleteReadError):
        pass
    finally:
        writer.close()


async def _ws_handler(websocket, default_config: EngineConfig, log_dir: str | None) -> None:
    conn = SessionConnection(default_config, log_dir)
    async for message in websocket:
        if isinstance(message, bytes):
            message = message.decode("utf-8")
        try:
            responses = conn.handle_line(message)
        except CloseConnection as closing:
            for out in closing.args[0]:
                await websocket.send(out)
            await websocket.close()
            return
        for out in responses:
            await websocket.send(out)


async def serve(
    host: str = "127.0.0.1",
    port: int = 7340,
    ws_port: int | None = None,
    default_config: EngineConfig | None = None,
    log_dir: str | None = None,
    ready: asyncio.Event | None = None,
) -> None:
    """Run the TCP service (and the WebSocket twin when ``ws_port`` is set)."""
    cfg = default_config if default_config is not None else EngineConfig()
    server = await asyncio.start_server(
        lambda r, w: _tcp_handler(r, w, cfg, log_dir), host, port
    )
    ws_server = None
    if ws_port is not None:
        from websockets.asyncio.server import serve as ws_serve

        ws_server = await ws_serve(
            lambda ws: _ws_handler(ws, cfg, log_dir), host, ws_port
        )
    addresses = ", ".join(str(sock.getsockname()) for sock in server.sockets)
    log.info("session service listening on %s", addresses)
    if ws_port is not None:
        log.info("websocket twin on port %d", ws_port)
    if ready is not None:
        ready.set()
    try:
        async with server:
            await server.serve_forever()
    finally:
        if ws_server is not None:
            ws_server.close()
            await ws_server.wait_closed()
