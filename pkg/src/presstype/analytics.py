"""Session metrics: normalized pressure deviations, error rates, timing stats.

All functions are pure over immutable logs.  Times feeding the speed
metrics are commit-to-commit gaps; per-record press durations are exported
alongside so either series can be plotted.
"""
from __future__ import annotations

from dataclasses import dataclass

from .layout import bin_center
from .trace import SessionLog
from .wire import dumps


@dataclass(frozen=True)
class BoxStats:
    min: float
    q1: float
    median: float
    q3: float
    max: float
    n: int


@dataclass(frozen=True)
class ExperimentReport:
    target: str
    pressure_stats: BoxStats
    time_stats: BoxStats
    error_rate: float
    cpm: float
    acceptable_halfwidth: float
    n_records: int
    n_errors: int


def _median(values: list[float]) -> float:
    m = len(values)
    if m % 2:
        return values[m // 2]
    return (values[m // 2 - 1] + values[m // 2]) / 2


def box_stats(values: list[float]) -> BoxStats:
    """Five-number summary; quartiles are medians of the halves, the overall
    median excluded from both halves when n is odd."""
    if not values:
        raise ValueError("box_stats needs at least one value")
    s = sorted(values)
    n = len(s)
    median = _median(s)
    lower = s[: n // 2]
    upper = s[(n + 1) // 2 :]
    return BoxStats(
        min=s[0],
        q1=_median(lower) if lower else median,
        median=median,
        q3=_median(upper) if upper else median,
        max=s[-1],
        n=n,
    )


def normalized_pressures(log: SessionLog, target: str) -> list[float]:
    """Selection pressure minus the intended target's bin center, per record.

    Always measured against the intended target, regardless of what was
    actually entered (single-target experiment protocol).
    """
    layout = log.config.layout
    center = bin_center(layout.index_of(target), layout)
    return [rec.selection_pressure - center for rec in log.records]


def error_count(log: SessionLog, target: str) -> int:
    log.config.layout.index_of(target)
    return sum(1 for rec in log.records if rec.symbol != target)


def error_rate(log: SessionLog, target: str) -> float:
    if not log.records:
        raise ValueError("error_rate needs a non-empty log")
    return error_count(log, target) / len(log.records)


def chars_per_minute(median_time_s: float) -> float:
    if median_time_s <= 0:
        raise ValueError("median time must be positive")
    return 60.0 / median_time_s


def what_if_scale(log: SessionLog, target: str, scale: float) -> float:
    """Error rate if each character's acceptable pressure band were scaled.

    A record counts as an error iff its deviation magnitude exceeds
    scale * 1/(2n).  At scale 1 this matches :func:`error_rate` on any
    engine-produced log.
    """
    if scale <= 0:
        raise ValueError("scale must be positive")
    if not log.records:
        raise ValueError("what_if_scale needs a non-empty log")
    halfwidth = scale * 0.5 / log.config.layout.n
    deviations = normalized_pressures(log, target)
    return sum(1 for d in deviations if abs(d) > halfwidth) / len(deviations)


def experiment_report(log: SessionLog, target: str) -> ExperimentReport:
    """Single-target session report over deviations and commit-to-commit gaps."""
    gaps = [rec.gap_s for rec in log.records if rec.gap_s is not None]
    if not gaps:
        raise ValueError("report needs at least 2 records (no gaps otherwise)")
    time_stats = box_stats(gaps)
    return ExperimentReport(
        target=target,
        pressure_stats=box_stats(normalized_pressures(log, target)),
        time_stats=time_stats,
        error_rate=error_rate(log, target),
        cpm=chars_per_minute(time_stats.median),
        acceptable_halfwidth=0.5 / log.config.layout.n,
        n_records=len(log.records),
        n_errors=error_count(log, target),
    )


def _box_obj(stats: BoxStats) -> dict:
    return {
        "min": stats.min,
        "q1": stats.q1,
        "median": stats.median,
        "q3": stats.q3,
        "max": stats.max,
        "n": stats.n,
    }


def report_lines(report: ExperimentReport, scaled: tuple[float, float] | None = None) -> str:
    """Report as one JSON line (same format family as the session log)."""
    obj = {
        "target": report.target,
        "n_records": report.n_records,
        "n_errors": report.n_errors,
        "error_rate": report.error_rate,
        "cpm": report.cpm,
        "acceptable_halfwidth": report.acceptable_halfwidth,
        "pressure_stats": _box_obj(report.pressure_stats),
        "time_stats": _box_obj(report.time_stats),
    }
    if scaled is not None:
        obj["scale"] = scaled[0]
        obj["scaled_error_rate"] = scaled[1]
    return dumps(obj) + "\n"


def report_table(report: ExperimentReport, scaled: tuple[float, float] | None = None) -> str:
    """Plain-text table for terminals; raw counts printed alongside rates."""
    rows = [
        ("target", report.target),
        ("records", str(report.n_records)),
        ("errors", f"{report.n_errors} ({100 * report.error_rate:.2f}%)"),
        ("chars/minute", f"{report.cpm:.1f}"),
        ("acceptable halfwidth", f"{report.acceptable_halfwidth:.6f}"),
    ]
    if scaled is not None:
        rows.append((f"error rate at scale {scaled[0]:g}", f"{100 * scaled[1]:.2f}%"))
    for name, stats in (("pressure dev", report.pressure_stats), ("gap s", report.time_stats)):
        rows.append(
            (
                name,
                f"min {stats.min:+.4f}  q1 {stats.q1:+.4f}  median {stats.median:+.4f}  "
                f"q3 {stats.q3:+.4f}  max {stats.max:+.4f}  (n={stats.n})",
            )
        )
    width = max(len(name) for name, _ in rows)
    return "".join(f"{name.ljust(width)}  {value}\n" for name, value in rows)
