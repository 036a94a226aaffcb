"""Canonical JSON-line encoding shared by session logs, reports and the live protocol.

Floats are written with 9 significant digits: enough to round-trip
single-precision sensor readings and microsecond-resolution timestamps.
``q9`` snaps a value onto that grid, so data quantized at ingestion
compares equal to whatever a reader parses back from disk or the wire.
"""
from __future__ import annotations

import json
import math
from typing import Any


def q9(x: float) -> float:
    """Snap a float onto the 9-significant-digit wire grid."""
    return float(format(float(x), ".9g"))


def dumps(value: Any) -> str:
    """Serialize to compact JSON with insertion-ordered keys and .9g floats.

    ``json.dumps`` offers no hook for float formatting, hence the tiny
    hand-rolled writer; output is byte-deterministic for equal inputs.
    """
    out: list[str] = []
    _write(value, out)
    return "".join(out)


def _write(value: Any, out: list[str]) -> None:
    if value is None:
        out.append("null")
    elif value is True:
        out.append("true")
    elif value is False:
        out.append("false")
    elif isinstance(value, str):
        out.append(json.dumps(value))
    elif isinstance(value, int):
        out.append(str(value))
    elif isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite number not serializable: {value!r}")
        out.append(format(value, ".9g"))
    elif isinstance(value, (list, tuple)):
        out.append("[")
        for i, item in enumerate(value):
            if i:
                out.append(",")
            _write(item, out)
        out.append("]")
    elif isinstance(value, dict):
        out.append("{")
        for i, (key, item) in enumerate(value.items()):
            if i:
                out.append(",")
            out.append(json.dumps(key))
            out.append(":")
            _write(item, out)
        out.append("}")
    else:
        raise TypeError(f"cannot serialize {type(value).__name__}")
