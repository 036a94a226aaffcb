"""Pressure-based text entry: engine, session logs, analytics, simulator, service."""

from .analytics import (
    BoxStats,
    ExperimentReport,
    box_stats,
    chars_per_minute,
    error_rate,
    experiment_report,
    normalized_pressures,
    what_if_scale,
)
from .engine import (
    CharacterCommitted,
    CharacterDeleted,
    DeletionSource,
    EngineConfig,
    EngineState,
    Hand,
    HighlightChanged,
    InputEvent,
    PressureEngine,
    PressureSample,
    RemapConfig,
    buffered_value,
    remap,
)
from .layout import BACKSPACE, SPACE, LayoutConfig, bin_center, bin_index, linear_layout
from .simulator import MotorModelParams, SweepRow, generate_trace, simulate_session, sweep
from .trace import (
    CharacterRecord,
    SessionLog,
    TraceFormatError,
    read_samples,
    read_session,
    replay,
    write_samples,
    write_session,
)

__version__ = "0.1.0"

__all__ = [
    "BACKSPACE",
    "BoxStats",
    "CharacterCommitted",
    "CharacterDeleted",
    "CharacterRecord",
    "DeletionSource",
    "EngineConfig",
    "EngineState",
    "ExperimentReport",
    "Hand",
    "HighlightChanged",
    "InputEvent",
    "LayoutConfig",
    "MotorModelParams",
    "PressureEngine",
    "PressureSample",
    "RemapConfig",
    "SPACE",
    "SessionLog",
    "SweepRow",
    "TraceFormatError",
    "bin_center",
    "bin_index",
    "box_stats",
    "buffered_value",
    "chars_per_minute",
    "error_rate",
    "experiment_report",
    "generate_trace",
    "linear_layout",
    "normalized_pressures",
    "read_samples",
    "read_session",
    "remap",
    "replay",
    "simulate_session",
    "sweep",
    "what_if_scale",
    "write_samples",
    "write_session",
]
