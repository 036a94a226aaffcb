"""Per-frame selection state machine: remap, smooth, highlight, confirm, hold-delete.

One engine instance per hand/session.  Time enters only through sample
timestamps, so identical sample sequences always produce identical event
sequences.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum

from .layout import LayoutConfig, bin_index
from .wire import q9


class Hand(Enum):
    LEFT = "L"
    RIGHT = "R"


class DeletionSource(Enum):
    COMMIT = "commit"
    HOLD_REPEAT = "hold_repeat"


@dataclass(frozen=True)
class RemapConfig:
    """Raw sensor sub-interval stretched to [0, 1]; below ``lo`` is the dead zone."""

    lo: float = 0.05
    hi: float = 0.55

    def __post_init__(self) -> None:
        # settings live at wire precision so a config survives a log header round trip
        object.__setattr__(self, "lo", q9(self.lo))
        object.__setattr__(self, "hi", q9(self.hi))
        if not 0.0 <= self.lo < self.hi <= 1.0:
            raise ValueError(f"remap interval [{self.lo}, {self.hi}] invalid")


@dataclass(frozen=True)
class PressureSample:
    """One timestamped raw sensor reading."""

    t: float
    raw: float
    hand: Hand = Hand.RIGHT


@dataclass(frozen=True)
class EngineConfig:
    layout: LayoutConfig = field(default_factory=LayoutConfig)
    remap: RemapConfig = field(default_factory=RemapConfig)
    buffer_size: int = 3
    nominal_rate: float = 72.0
    hold_delete_delay: float = 0.5
    hold_delete_rate: float = 10.0
    # None -> the backspace bin's center, 1 - 1/(2n)
    hold_threshold: float | None = None

    def __post_init__(self) -> None:
        if self.buffer_size < 1:
            raise ValueError("buffer_size must be >= 1")
        if self.nominal_rate <= 0 or self.hold_delete_rate <= 0:
            raise ValueError("rates must be positive")
        if self.hold_delete_delay < 0:
            raise ValueError("hold_delete_delay must be >= 0")
        if self.hold_threshold is None:
            object.__setattr__(self, "hold_threshold", 1.0 - 1.0 / (2 * self.layout.n))
        # same wire-precision rule as RemapConfig
        for name in ("nominal_rate", "hold_delete_delay", "hold_delete_rate", "hold_threshold"):
            object.__setattr__(self, name, q9(getattr(self, name)))
        if not 0.0 < self.hold_threshold <= 1.0:
            raise ValueError("hold_threshold must lie in (0, 1]")


@dataclass(frozen=True)
class HighlightChanged:
    index: int
    buffered_pressure: float
    t: float


@dataclass(frozen=True)
class CharacterCommitted:
    symbol: str
    selection_pressure: float
    duration_s: float
    hand: Hand
    t: float


@dataclass(frozen=True)
class CharacterDeleted:
    t: float
    source: DeletionSource


InputEvent = HighlightChanged | CharacterCommitted | CharacterDeleted


@dataclass
class EngineState:
    window: deque[float]
    prev_buffered: float = 0.0
    highlighted: int | None = None
    armed: bool = False
    arm_time: float | None = None
    highlight_pressure: float = 0.0
    hold_since: float | None = None
    hold_emitted: int = 0
    text: list[str] = field(default_factory=list)
    last_time: float | None = None


def remap(raw: float, cfg: RemapConfig) -> float:
    """Map raw sensor pressure onto [0, 1]; the interval outside [lo, hi] saturates."""
    if not 0.0 <= raw <= 1.0:
        raise ValueError(f"raw pressure {raw!r} outside [0, 1]")
    if raw <= cfg.lo:
        return 0.0
    if raw >= cfg.hi:
        return 1.0
    return (raw - cfg.lo) / (cfg.hi - cfg.lo)


def buffered_value(window: deque[float]) -> float:
    """Arithmetic mean of the smoothing window."""
    return sum(window) / len(window)


def initial_state(cfg: EngineConfig) -> EngineState:
    """Fresh state: window pre-filled with zeros so frame 1 is well-defined."""
    return EngineState(window=deque([0.0] * cfg.buffer_size, maxlen=cfg.buffer_size))


class PressureEngine:
    """Deterministic single-session engine; never share one instance across threads."""

    def __init__(self, config: EngineConfig | None = None):
        self.config = config if config is not None else EngineConfig()
        self.state = initial_state(self.config)

    def reset(self) -> EngineState:
        self.state = initial_state(self.config)
        return self.state

    def step(self, sample: PressureSample) -> list[InputEvent]:
        """Process one sample; returns the events it triggered, in emission order.

        Rejects out-of-range raws and non-increasing timestamps before any
        state is touched.
        """
        cfg = self.config
        st = self.state
        if not 0.0 <= sample.raw <= 1.0:
            raise ValueError(f"raw pressure {sample.raw!r} outside [0, 1]")
        if st.last_time is not None and sample.t <= st.last_time:
            raise ValueError(
                f"timestamp {sample.t!r} not after last processed {st.last_time!r}"
            )

        events: list[InputEvent] = []
        n = cfg.layout.n

        # 1. remap and smooth
        n_raw = remap(sample.raw, cfg.remap)
        st.window.append(n_raw)
        b = buffered_value(st.window)

        # 2. the highlight follows the buffered value, but only while it increases
        if b > st.prev_buffered:
            index = bin_index(b, cfg.layout)
            changed = index != st.highlighted
            was_armed = st.armed
            st.highlighted = index
            st.highlight_pressure = b
            if changed or not was_armed:
                events.append(HighlightChanged(index=index, buffered_pressure=b, t=sample.t))
                if not was_armed:
                    st.armed = True
                    st.arm_time = sample.t

        # 3. hold-to-delete while saturating the backspace bin
        if st.highlighted == n - 1 and b >= cfg.hold_threshold:
            if st.hold_since is None:
                st.hold_since = sample.t
                st.hold_emitted = 0
            else:
                past = (sample.t - st.hold_since) - cfg.hold_delete_delay
                if past >= 0.0:
                    due = int(math.floor(past * cfg.hold_delete_rate))
                    for _ in range(due - st.hold_emitted):
                        if st.text:
                            st.text.pop()
                        events.append(
                            CharacterDeleted(t=sample.t, source=DeletionSource.HOLD_REPEAT)
                        )
                    if due > st.hold_emitted:
                        st.hold_emitted = due
        else:
            st.hold_since = None
            st.hold_emitted = 0

        # 4. raw-zero confirmation (deliberately bypasses the buffer)
        if n_raw == 0.0 and st.armed:
            if st.highlighted == n - 1:
                if st.text:
                    st.text.pop()
                events.append(CharacterDeleted(t=sample.t, source=DeletionSource.COMMIT))
            else:
                symbol = cfg.layout.characters[st.highlighted]
                st.text.append(symbol)
                events.append(
                    CharacterCommitted(
                        symbol=symbol,
                        selection_pressure=st.highlight_pressure,
                        duration_s=sample.t - st.arm_time,
                        hand=sample.hand,
                        t=sample.t,
                    )
                )
            st.armed = False
            st.highlighted = None
            st.arm_time = None
            st.hold_since = None
            st.hold_emitted = 0

        # 5. remember this frame's buffered value for the next increase test
        st.prev_buffered = b
        st.last_time = sample.t
        return events
