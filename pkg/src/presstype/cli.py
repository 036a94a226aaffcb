"""Command line entry point: serve, replay, report, simulate, sweep.

Engine settings resolve in three layers: built-in defaults, then a JSON
config file named by $PRESSTYPE_CONFIG, then explicit flags.
"""
from __future__ import annotations

import argparse
import asyncio
import json
import os
import sys

from .analytics import experiment_report, report_lines, report_table, what_if_scale
from .engine import EngineConfig
from .layout import linear_layout
from .service import apply_overrides, serve
from .simulator import MotorModelParams, derive_seed, generate_trace, simulate_session, sweep
from .trace import (
    SessionLog,
    read_samples,
    read_session,
    replay,
    write_samples,
    write_session,
)
from .wire import dumps

_CONFIG_ENV = "PRESSTYPE_CONFIG"

_FLAG_TO_FIELD = {
    "remap_lo": "remap_lo",
    "remap_hi": "remap_hi",
    "buffer_size": "buffer_size",
    "nominal_rate": "nominal_rate",
    "hold_delete_delay": "hold_delete_delay",
    "hold_delete_rate": "hold_delete_rate",
    "hold_threshold": "hold_threshold",
}


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("engine config (overrides $PRESSTYPE_CONFIG)")
    group.add_argument("--remap-lo", type=float, dest="remap_lo")
    group.add_argument("--remap-hi", type=float, dest="remap_hi")
    group.add_argument("--buffer-size", type=int, dest="buffer_size")
    group.add_argument("--nominal-rate", type=float, dest="nominal_rate")
    group.add_argument("--hold-delete-delay", type=float, dest="hold_delete_delay")
    group.add_argument("--hold-delete-rate", type=float, dest="hold_delete_rate")
    group.add_argument("--hold-threshold", type=float, dest="hold_threshold")
    group.add_argument("--layout-size", type=int, dest="layout_size")


def build_config(args: argparse.Namespace) -> EngineConfig:
    cfg = EngineConfig()
    path = os.environ.get(_CONFIG_ENV)
    if path:
        with open(path, encoding="utf-8") as fp:
            cfg = apply_overrides(cfg, json.load(fp))
    overrides = {
        field: getattr(args, flag)
        for flag, field in _FLAG_TO_FIELD.items()
        if getattr(args, flag, None) is not None
    }
    if getattr(args, "layout_size", None) is not None:
        overrides["layout"] = list(linear_layout(args.layout_size).characters)
    return apply_overrides(cfg, overrides)


def _add_model_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("motor model")
    group.add_argument("--rise-rate", type=float, default=2.0)
    group.add_argument("--overshoot-sd", type=float, default=0.02)
    group.add_argument("--tremor-sd", type=float, default=0.005)
    group.add_argument("--dwell-s", type=float, default=0.15)
    group.add_argument("--release-rate", type=float, default=4.0)
    group.add_argument("--sample-rate", type=float, default=72.0)


def _model_from_args(args: argparse.Namespace) -> MotorModelParams:
    return MotorModelParams(
        target=args.target,
        rise_rate=args.rise_rate,
        overshoot_sd=args.overshoot_sd,
        tremor_sd=args.tremor_sd,
        dwell_s=args.dwell_s,
        release_rate=args.release_rate,
        sample_rate=args.sample_rate,
        seed=args.seed,
    )


def cmd_serve(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    host, _, port = args.bind.rpartition(":")
    try:
        asyncio.run(
            serve(
                host=host or "127.0.0.1",
                port=int(port),
                ws_port=args.ws_port,
                default_config=cfg,
                log_dir=args.log_dir,
            )
        )
    except KeyboardInterrupt:
        pass
    return 0


def cmd_replay(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    with open(args.samples, encoding="utf-8") as fp:
        samples = read_samples(fp)
    session = replay(samples, cfg, keep_idle=args.keep_idle)
    with open(args.out, "w", encoding="utf-8") as fp:
        write_session(session, fp)
    if args.keep_idle and session.idle_samples:
        with open(args.out + ".idle", "w", encoding="utf-8") as fp:
            write_samples(session.idle_samples, fp)
    print(f"{len(session.records)} records -> {args.out}")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    with open(args.log, encoding="utf-8") as fp:
        session = read_session(fp)
    report = experiment_report(session, args.target)
    scaled = None
    if args.scale is not None:
        scaled = (args.scale, what_if_scale(session, args.target, args.scale))
    if args.format == "table":
        sys.stdout.write(report_table(report, scaled))
    else:
        sys.stdout.write(report_lines(report, scaled))
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    params = _model_from_args(args)
    stream, session = simulate_session(params, cfg, trials=args.trials)
    if args.samples_out:
        with open(args.samples_out, "w", encoding="utf-8") as fp:
            write_samples(stream, fp)
    with open(args.out, "w", encoding="utf-8") as fp:
        write_session(session, fp)
    print(f"{args.trials} trials, {len(session.records)} records -> {args.out}")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    grid: list[tuple[EngineConfig, MotorModelParams]] = []
    specs: list[dict] = []
    with open(args.grid, encoding="utf-8") as fp:
        for line in fp:
            line = line.strip()
            if not line:
                continue
            specs.append(json.loads(line))
    base = EngineConfig()
    model_keys = {
        "target",
        "rise_rate",
        "overshoot_sd",
        "tremor_sd",
        "dwell_s",
        "release_rate",
        "sample_rate",
        "seed",
    }
    for spec in specs:
        engine_overrides = {k: v for k, v in spec.items() if k not in model_keys and k != "layout_size"}
        if "layout_size" in spec:
            engine_overrides["layout"] = list(linear_layout(int(spec["layout_size"])).characters)
        cfg = apply_overrides(base, engine_overrides)
        params = MotorModelParams(**{k: spec[k] for k in model_keys if k in spec})
        grid.append((cfg, params))
    rows = sweep(grid, trials=args.trials)
    with open(args.out, "w", encoding="utf-8") as fp:
        for gi, (spec, row) in enumerate(zip(specs, rows)):
            fp.write(
                dumps(
                    {
                        "grid_index": gi,
                        **spec,
                        "error_rate": row.error_rate,
                        "median_time_s": row.median_time_s,
                        "n_records": row.n_records,
                    }
                )
            )
            fp.write("\n")
    print(f"{len(rows)} grid points -> {args.out}")
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="presstype", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the live session service")
    p.add_argument("--bind", default="127.0.0.1:7340", help="host:port for the TCP stream")
    p.add_argument("--ws-port", type=int, default=None, help="also expose a WebSocket twin")
    p.add_argument("--log-dir", default=None, help="write session logs here on end_session")
    _add_config_flags(p)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("replay", help="replay a raw samples file into a session log")
    p.add_argument("samples")
    p.add_argument("--out", required=True)
    p.add_argument("--keep-idle", action="store_true", help="save idle samples to <out>.idle")
    _add_config_flags(p)
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("report", help="metrics for a single-target session log")
    p.add_argument("log")
    p.add_argument("--target", required=True)
    p.add_argument("--scale", type=float, default=None, help="what-if pressure-band scale")
    p.add_argument("--format", choices=("table", "lines"), default="table")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("simulate", help="generate synthetic trials and their session log")
    p.add_argument("--target", required=True)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--samples-out", default=None, help="also write the raw sample stream")
    _add_model_flags(p)
    _add_config_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="error-rate sweep over a config/model grid")
    p.add_argument("--grid", required=True, help="JSONL grid file, one point per line")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
