"""Synthetic-user motor model: pressure traces aimed at target characters.

A trial ramps toward the target's bin center plus a Gaussian aim error,
jitters around the plateau, then releases to zero.  The trajectory is
built in normalized space and inverse-remapped into raw sensor units so
the engine's dead-zone and saturation paths are exercised end to end.
The model is a test instrument for error-rate studies, not a claim about
human motor control.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, replace

from .analytics import box_stats, error_rate
from .engine import EngineConfig, Hand, PressureSample
from .layout import LayoutConfig, bin_center
from .trace import CharacterRecord, SessionLog, replay
from .wire import q9


@dataclass(frozen=True)
class MotorModelParams:
    target: str
    rise_rate: float = 2.0  # normalized pressure per second
    overshoot_sd: float = 0.02  # sd of the per-trial aim error
    tremor_sd: float = 0.005  # sd of per-sample jitter on rise and dwell
    dwell_s: float = 0.15  # plateau long enough to flush the smoothing window
    release_rate: float = 4.0
    sample_rate: float = 72.0
    seed: int = 0

    def __post_init__(self) -> None:
        if min(self.rise_rate, self.release_rate, self.sample_rate) <= 0:
            raise ValueError("rates must be positive")
        if self.overshoot_sd < 0 or self.tremor_sd < 0:
            raise ValueError("noise sds must be >= 0")
        if self.dwell_s < 0:
            raise ValueError("dwell_s must be >= 0")


def generate_trace(
    params: MotorModelParams,
    layout: LayoutConfig | None = None,
    remap=None,
    hand: Hand = Hand.RIGHT,
    t_offset: float = 0.0,
) -> list[PressureSample]:
    """Deterministic trace for one press-release trial.

    With both sds at zero the trajectory peaks exactly at the target's bin
    center, so replaying it commits the target.  Timestamps advance at
    1/sample_rate from ``t_offset``; values are snapped to wire precision.
    """
    from .engine import RemapConfig  # local import keeps module load order simple

    layout = layout if layout is not None else LayoutConfig()
    remap = remap if remap is not None else RemapConfig()
    rng = random.Random(params.seed)
    dt = 1.0 / params.sample_rate

    peak = bin_center(layout.index_of(params.target), layout)
    if params.overshoot_sd > 0:
        peak += rng.gauss(0.0, params.overshoot_sd)

    samples: list[PressureSample] = []

    def push(n: float) -> None:
        raw = remap.lo + n * (remap.hi - remap.lo) if n > 0 else 0.0
        raw = min(max(raw, 0.0), 1.0)
        t = t_offset + (len(samples) + 1) * dt
        samples.append(PressureSample(t=q9(t), raw=q9(raw), hand=hand))

    def jitter(n: float) -> float:
        return n + rng.gauss(0.0, params.tremor_sd) if params.tremor_sd > 0 else n

    n = 0.0
    while n < peak:
        n = min(n + params.rise_rate * dt, peak)
        push(jitter(n))
    for _ in range(max(1, round(params.dwell_s * params.sample_rate))):
        push(jitter(peak))
    while n > 0:
        n -= params.release_rate * dt
        push(max(n, 0.0))
    push(0.0)  # trailing frame so the confirming zero is unambiguous
    return samples


def derive_seed(base: int, grid_index: int, trial: int) -> int:
    """Per-trial seed; stable given (base, grid point, trial)."""
    return (base * 1_000_003 + grid_index) * 1_000_003 + trial


def simulate_session(
    params: MotorModelParams,
    cfg: EngineConfig | None = None,
    trials: int = 1,
    hand: Hand = Hand.RIGHT,
) -> tuple[list[PressureSample], SessionLog]:
    """Concatenate ``trials`` traces into one stream and replay it.

    Back-to-back trials give the log real commit-to-commit gaps, so the
    reporting pipeline works on simulated sessions unchanged.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    cfg = cfg if cfg is not None else EngineConfig()
    stream: list[PressureSample] = []
    t_offset = 0.0
    for trial in range(trials):
        trace = generate_trace(
            replace(params, seed=derive_seed(params.seed, 0, trial)),
            cfg.layout,
            cfg.remap,
            hand=hand,
            t_offset=t_offset,
        )
        stream.extend(trace)
        t_offset = trace[-1].t
    return stream, replay(stream, cfg)


@dataclass(frozen=True)
class SweepRow:
    config: EngineConfig
    params: MotorModelParams
    error_rate: float | None
    median_time_s: float | None
    n_records: int


def sweep(
    grid: list[tuple[EngineConfig, MotorModelParams]], trials: int
) -> list[SweepRow]:
    """Replay ``trials`` seeded traces per grid point and score them.

    Per-trial seeds derive from (grid index, trial index), so rows are
    reproducible independently of each other.  ``median_time_s`` is the
    median press duration (single-entry trials have no inter-commit gaps).
    """
    if not grid:
        raise ValueError("sweep needs a non-empty grid")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rows: list[SweepRow] = []
    for gi, (cfg, params) in enumerate(grid):
        records: list[CharacterRecord] = []
        for trial in range(trials):
            trace = generate_trace(
                replace(params, seed=derive_seed(params.seed, gi, trial)),
                cfg.layout,
                cfg.remap,
            )
            records.extend(replay(trace, cfg).records)
        pooled = SessionLog(config=cfg, records=records)
        rows.append(
            SweepRow(
                config=cfg,
                params=params,
                error_rate=error_rate(pooled, params.target) if records else None,
                median_time_s=(
                    box_stats([r.duration_s for r in records]).median if records else None
                ),
                n_records=len(records),
            )
        )
    return rows
