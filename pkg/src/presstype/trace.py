"""Session logging and deterministic replay.

A session log is UTF-8, one JSON object per line: a header carrying the
engine configuration, then one line per character record.  Replaying the
records' concatenated samples through an engine built from the header
reproduces the records bit-exactly, because every float is snapped to the
wire grid (see :mod:`presstype.wire`) before it reaches the engine.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator

from .engine import (
    CharacterCommitted,
    CharacterDeleted,
    DeletionSource,
    EngineConfig,
    Hand,
    HighlightChanged,
    InputEvent,
    PressureEngine,
    PressureSample,
    RemapConfig,
)
from .layout import LayoutConfig
from .wire import dumps, q9

FORMAT_VERSION = 1


class TraceFormatError(ValueError):
    """Malformed session-log or samples stream; message names line and field."""


@dataclass
class CharacterRecord:
    symbol: str
    selection_pressure: float
    duration_s: float
    gap_s: float | None
    hand: Hand
    samples: list[tuple[float, float]]
    # "commit" / "hold_repeat" on deletion records, None on ordinary entries
    source: str | None = None


@dataclass
class SessionLog:
    config: EngineConfig
    records: list[CharacterRecord] = field(default_factory=list)
    created_at: str | None = None
    # Dead-zone samples between episodes, kept only when replay(..., keep_idle=True);
    # written to an auxiliary stream, never to the log itself.
    idle_samples: list[PressureSample] | None = field(
        default=None, compare=False, repr=False
    )


def config_to_header(cfg: EngineConfig, created_at: str | None) -> dict:
    return {
        "version": FORMAT_VERSION,
        "created_at": created_at,
        "layout": list(cfg.layout.characters),
        "remap_lo": cfg.remap.lo,
        "remap_hi": cfg.remap.hi,
        "buffer_size": cfg.buffer_size,
        "nominal_rate": cfg.nominal_rate,
        "hold_delete_delay": cfg.hold_delete_delay,
        "hold_delete_rate": cfg.hold_delete_rate,
        "hold_threshold": cfg.hold_threshold,
    }


def config_from_header(header: dict) -> EngineConfig:
    return EngineConfig(
        layout=LayoutConfig(tuple(header["layout"])),
        remap=RemapConfig(lo=float(header["remap_lo"]), hi=float(header["remap_hi"])),
        buffer_size=int(header["buffer_size"]),
        nominal_rate=float(header["nominal_rate"]),
        hold_delete_delay=float(header["hold_delete_delay"]),
        hold_delete_rate=float(header["hold_delete_rate"]),
        hold_threshold=float(header["hold_threshold"]),
    )


def _record_to_obj(rec: CharacterRecord) -> dict:
    obj = {
        "symbol": rec.symbol,
        "selection_pressure": rec.selection_pressure,
        "duration_s": rec.duration_s,
        "gap_s": rec.gap_s,
        "hand": rec.hand.value,
        "samples": [[t, raw] for t, raw in rec.samples],
    }
    if rec.source is not None:
        obj["source"] = rec.source
    return obj


_RECORD_FIELDS = ("symbol", "selection_pressure", "duration_s", "gap_s", "hand", "samples")


def _record_from_obj(obj: dict, lineno: int) -> CharacterRecord:
    for name in _RECORD_FIELDS:
        if name not in obj:
            raise TraceFormatError(f"line {lineno}: missing field '{name}'")
    try:
        hand = Hand(obj["hand"])
    except ValueError:
        raise TraceFormatError(f"line {lineno}: field 'hand' must be 'L' or 'R'") from None
    try:
        samples = [(float(t), float(raw)) for t, raw in obj["samples"]]
    except (TypeError, ValueError):
        raise TraceFormatError(f"line {lineno}: field 'samples' must be [t, raw] pairs") from None
    try:
        gap = obj["gap_s"]
        return CharacterRecord(
            symbol=str(obj["symbol"]),
            selection_pressure=float(obj["selection_pressure"]),
            duration_s=float(obj["duration_s"]),
            gap_s=None if gap is None else float(gap),
            hand=hand,
            samples=samples,
            source=obj.get("source"),
        )
    except (TypeError, ValueError) as exc:
        raise TraceFormatError(f"line {lineno}: bad numeric field ({exc})") from None


def session_lines(log: SessionLog) -> Iterator[str]:
    yield dumps(config_to_header(log.config, log.created_at))
    for rec in log.records:
        yield dumps(_record_to_obj(rec))


def write_session(log: SessionLog, sink: IO[str]) -> None:
    """One header line plus one line per record; numbers at wire precision."""
    for line in session_lines(log):
        sink.write(line)
        sink.write("\n")


def serialize_session(log: SessionLog) -> str:
    return "".join(line + "\n" for line in session_lines(log))


def read_session(source: IO[str] | Iterable[str]) -> SessionLog:
    """Exact inverse of :func:`write_session`."""
    header = None
    records: list[CharacterRecord] = []
    lineno = 0
    for lineno, line in enumerate(source, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise TraceFormatError(f"line {lineno}: invalid JSON ({exc.msg})") from None
        if header is None:
            if "version" not in obj:
                raise TraceFormatError(f"line {lineno}: missing field 'version' in header")
            if obj["version"] != FORMAT_VERSION:
                raise TraceFormatError(
                    f"line {lineno}: unsupported version {obj['version']!r} "
                    f"(expected {FORMAT_VERSION})"
                )
            header = obj
        else:
            records.append(_record_from_obj(obj, lineno))
    if header is None:
        raise TraceFormatError("empty stream: no header line")
    try:
        config = config_from_header(header)
    except KeyError as exc:
        raise TraceFormatError(f"line 1: missing header field {exc.args[0]!r}") from None
    return SessionLog(config=config, records=records, created_at=header.get("created_at"))


def write_samples(samples: Iterable[PressureSample], sink: IO[str]) -> None:
    """Raw sample stream, one {"t", "raw", "hand"} object per line."""
    for s in samples:
        sink.write(dumps({"t": s.t, "raw": s.raw, "hand": s.hand.value}))
        sink.write("\n")


def read_samples(source: IO[str] | Iterable[str]) -> list[PressureSample]:
    samples: list[PressureSample] = []
    for lineno, line in enumerate(source, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise TraceFormatError(f"line {lineno}: invalid JSON ({exc.msg})") from None
        try:
            samples.append(
                PressureSample(t=float(obj["t"]), raw=float(obj["raw"]), hand=Hand(obj["hand"]))
            )
        except KeyError as exc:
            raise TraceFormatError(f"line {lineno}: missing field {exc.args[0]!r}") from None
        except (TypeError, ValueError):
            raise TraceFormatError(f"line {lineno}: bad sample fields") from None
    return samples


class RecordAssembler:
    """Groups engine events into character records, one episode at a time.

    An episode runs from the arming frame to the confirming raw-zero frame;
    its samples land on the record that closes it.  Hold-repeat deletions
    become records of their own with empty sample lists, so every sample
    belongs to at most one record.
    """

    def __init__(self, layout: LayoutConfig, keep_idle: bool = False):
        self.layout = layout
        self.keep_idle = keep_idle
        self.idle_samples: list[PressureSample] = []
        self._episode: list[tuple[float, float]] = []
        self._active = False
        self._arm_time = 0.0
        self._last_highlight_pressure = 0.0
        self._last_record_time: float | None = None

    def reset(self) -> None:
        self._episode = []
        self._active = False
        self._arm_time = 0.0
        self._last_highlight_pressure = 0.0
        self._last_record_time = None

    def episode_samples(self) -> list[tuple[float, float]]:
        return list(self._episode)

    def feed(self, sample: PressureSample, events: list[InputEvent]) -> list[CharacterRecord]:
        if not self._active and any(isinstance(ev, HighlightChanged) for ev in events):
            self._active = True
            self._arm_time = sample.t
            self._episode = []
        if self._active:
            self._episode.append((sample.t, sample.raw))
        elif self.keep_idle:
            self.idle_samples.append(sample)

        completed: list[CharacterRecord] = []
        for ev in events:
            if isinstance(ev, HighlightChanged):
                self._last_highlight_pressure = ev.buffered_pressure
            elif isinstance(ev, CharacterCommitted):
                completed.append(
                    CharacterRecord(
                        symbol=ev.symbol,
                        selection_pressure=q9(ev.selection_pressure),
                        duration_s=q9(ev.duration_s),
                        gap_s=self._gap(ev.t),
                        hand=ev.hand,
                        samples=self._episode,
                    )
                )
                self._close_episode(ev.t)
            elif isinstance(ev, CharacterDeleted):
                if ev.source is DeletionSource.HOLD_REPEAT:
                    completed.append(
                        CharacterRecord(
                            symbol=self.layout.characters[-1],
                            selection_pressure=q9(self._last_highlight_pressure),
                            duration_s=q9(ev.t - self._arm_time),
                            gap_s=self._gap(ev.t),
                            hand=sample.hand,
                            samples=[],
                            source=ev.source.value,
                        )
                    )
                    self._last_record_time = ev.t
                else:
                    completed.append(
                        CharacterRecord(
                            symbol=self.layout.characters[-1],
                            selection_pressure=q9(self._last_highlight_pressure),
                            duration_s=q9(ev.t - self._arm_time),
                            gap_s=self._gap(ev.t),
                            hand=sample.hand,
                            samples=self._episode,
                            source=ev.source.value,
                        )
                    )
                    self._close_episode(ev.t)
        return completed

    def _gap(self, t: float) -> float | None:
        if self._last_record_time is None:
            return None
        return q9(t - self._last_record_time)

    def _close_episode(self, t: float) -> None:
        self._episode = []
        self._active = False
        self._last_record_time = t


def replay(
    samples: Iterable[PressureSample],
    cfg: EngineConfig | None = None,
    keep_idle: bool = False,
) -> SessionLog:
    """Feed raw samples through a fresh engine and assemble the session log.

    Samples are snapped to wire precision first, so a log written to disk
    replays to the identical log when read back.
    """
    cfg = cfg if cfg is not None else EngineConfig()
    engine = PressureEngine(cfg)
    assembler = RecordAssembler(cfg.layout, keep_idle=keep_idle)
    records: list[CharacterRecord] = []
    for s in samples:
        snapped = PressureSample(t=q9(s.t), raw=q9(s.raw), hand=s.hand)
        records.extend(assembler.feed(snapped, engine.step(snapped)))
    return SessionLog(
        config=cfg,
        records=records,
        idle_samples=assembler.idle_samples if keep_idle else None,
    )
