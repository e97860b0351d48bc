"""``evfocus`` command line: simulate, bin, focus, bench, eval, suite.

JSON goes to stdout; warnings and errors go to stderr. Exit status is 0 on
success, 1 for pipeline/domain errors and 2 for usage or file errors.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import statistics
import sys
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from . import io as evio
from .config import ConfigError, load_config
from .epr import DEFAULT_DT_US, EprSequence, NormalizationMode, bin_events
from .events import Roi
from .pipeline import METHODS, FocusOptions, run_focus, warm_up
from .sim import (
    PATTERNS,
    EventGenConfig,
    NoiseConfig,
    OpticsConfig,
    SweepConfig,
    load_pgm_scene,
    make_pattern,
    simulate_sweep,
)
from .wavelet import available

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _warn(msg: str) -> None:
    print(f"evfocus: warning: {msg}", file=sys.stderr)


def _emit(payload) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _need(cond: bool, flag: str, msg: str) -> None:
    if not cond:
        raise UsageError(f"{flag} {msg}")


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("EVFOCUS_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"EVFOCUS_SEED must be an integer, got {env!r}") from None


def _sidecars(events_path: Path) -> tuple[Path, Path]:
    return events_path.with_suffix(".truth.json"), events_path.with_suffix(".cal.csv")


# --------------------------------------------------------------- simulate

def _simulate_configs(args):
    _need(args.width >= 8 and args.height >= 8, "--width/--height", "must be >= 8")
    _need(0 < args.lo and 0 < args.hi, "--lo/--hi", "must be positive")
    _need(args.f_mm > 0, "--f-mm", "must be positive")
    _need(args.f_number > 0, "--f-number", "must be positive")
    _need(args.u_mm > args.f_mm, "--u-mm", "must exceed --f-mm")
    _need(args.pitch_um > 0, "--pitch-um", "must be positive")
    _need(args.speed > 0, "--speed", "must be positive")
    _need(args.steps >= 3, "--steps", "must be >= 3")
    _need(args.dv_start != args.dv_end, "--dv-start/--dv-end", "must differ")
    _need(args.t_start >= 0, "--t-start", "must be >= 0")
    _need(args.c_pos > 0 and args.c_neg > 0, "--c-pos/--c-neg", "must be positive")
    for flag in ("dark_rate", "aps_period", "aps_amplitude", "strobe_freq", "strobe_depth"):
        _need(getattr(args, flag) >= 0, "--" + flag.replace("_", "-"), "must be >= 0")

    optics = OpticsConfig.from_f_number(args.f_mm * 1000, args.f_number, args.u_mm * 1000, args.pitch_um)
    sweep = SweepConfig(args.dv_start, args.dv_end, args.speed, args.steps, args.t_start)
    noise = NoiseConfig(
        dark_rate_hz=args.dark_rate,
        aps_period_s=args.aps_period,
        aps_amplitude=args.aps_amplitude,
        strobe_freq_hz=args.strobe_freq,
        strobe_log_depth=args.strobe_depth,
        seed=_seed(args),
    )
    gen = EventGenConfig(args.c_pos, args.c_neg, noise, args.residual)
    return optics, sweep, gen


def cmd_simulate(args) -> int:
    optics, sweep, gen = _simulate_configs(args)
    if args.scene:
        scene = load_pgm_scene(args.scene)
    else:
        scene = make_pattern(args.pattern, args.width, args.height, args.lo, args.hi, seed=gen.noise.seed)
    roi = Roi.parse(args.roi) if args.roi else None
    stream, gt = simulate_sweep(scene, optics, sweep, gen, roi)
    if len(stream) == 0:
        _warn("simulation produced no events (uniform scene or no contrast in the ROI)")

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    evio.write_events(out, stream)
    truth_path, cal_path = _sidecars(out)
    times = sweep.time_at(sweep.defocus)
    evio.write_calibration(cal_path, evio.Calibration(times, sweep.defocus))
    window = [int(sweep.t_start), int(sweep.step_times.max()) + 1]
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command")}
    config["seed"] = gen.noise.seed
    truth = {
        "ground_truth_time_us": gt,
        "speed_um_s": sweep.speed,
        "dv_start_um": sweep.dv_start,
        "dv_end_um": sweep.dv_end,
        "window_us": window,
        "n_events": len(stream),
        "optics": asdict(optics),
        "config": config,
        "version": __version__,
    }
    truth_path.write_text(json.dumps(truth, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    _emit({
        "events": str(out),
        "truth": str(truth_path),
        "calibration": str(cal_path),
        "n_events": len(stream),
        "n_positive": stream.n_positive,
        "n_negative": stream.n_negative,
        "ground_truth_time_us": gt,
    })
    return EXIT_OK


# --------------------------------------------------------------- bin/focus

def _load_truth(path: Path | None) -> dict | None:
    if path is None or not path.exists():
        return None
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise evio.FormatError(f"{path}: invalid JSON ({exc})") from None


def _sequence(args) -> tuple[EprSequence, dict | None, evio.Calibration | None, float]:
    """Load the input as a binned sequence; returns (seq, truth, calibration, bin_ms)."""
    path = Path(args.input)
    if not path.exists():
        raise FileNotFoundError(f"no such file: {path}")
    truth_default, cal_default = _sidecars(path)
    truth_path = Path(args.truth) if getattr(args, "truth", None) else truth_default
    cal_path = Path(args.calibration) if getattr(args, "calibration", None) else cal_default
    if getattr(args, "no_sidecars", False):
        truth_path = Path(args.truth) if args.truth else None
        cal_path = Path(args.calibration) if args.calibration else None
    for given, p in ((getattr(args, "truth", None), truth_path), (getattr(args, "calibration", None), cal_path)):
        if given and not p.exists():
            raise FileNotFoundError(f"no such file: {p}")
    truth = _load_truth(truth_path)
    cal = evio.read_calibration(cal_path) if cal_path is not None and cal_path.exists() else None

    with open(path, "rb") as fh:
        head = fh.read(64)
    if evio.EPR_HEADER.encode() in head or head.startswith(b"# dt_us"):
        return evio.read_epr(path), truth, cal, 0.0

    _need(args.dt >= 1, "--dt", "must be >= 1 us")
    stream = evio.read_events(path)
    roi = Roi.parse(args.roi) if args.roi else None
    t_start, t_end = args.t_start, args.t_end
    if truth and "window_us" in truth:
        t_start = truth["window_us"][0] if t_start is None else t_start
        t_end = truth["window_us"][1] if t_end is None else t_end
    t0 = time.perf_counter()
    seq = bin_events(stream, roi, args.dt, t_start, t_end)
    return seq, truth, cal, (time.perf_counter() - t0) * 1e3


def cmd_bin(args) -> int:
    seq, _, _, _ = _sequence(args)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    evio.write_epr(out, seq)
    _emit({
        "epr": str(out), "n_bins": seq.n, "dt_us": seq.dt, "t0_us": seq.t0,
        "partial_final_bin": seq.partial_final_bin,
        "total_positive": float(seq.per.sum()), "total_negative": float(seq.ner.sum()),
    })
    return EXIT_OK


def _focus_options(args) -> FocusOptions:
    _need(0 < args.k < 1, "--k", "must lie in (0, 1)")
    _need(args.levels >= 1, "--levels", "must be >= 1")
    _need(args.window_s > 0, "--window-s", "must be positive")
    _need(args.tol_bins >= 1, "--tol-bins", "must be >= 1")
    return FocusOptions(args.k, args.norm, args.wavelet, args.levels, args.window_s, args.tol_bins)


def _position(cal, truth, t_us: float) -> float | None:
    if cal is not None:
        return evio.time_to_position(cal, t_us)
    if truth is not None:
        direction = 1.0 if truth["dv_end_um"] > truth["dv_start_um"] else -1.0
        t_start = truth["window_us"][0]
        return truth["dv_start_um"] + direction * (t_us - t_start) * truth["speed_um_s"] / 1e6
    return None


def _focus_one(seq, truth, cal, method, opts, source):
    warm_up()
    t0 = time.perf_counter()
    result = run_focus(seq, method, opts)
    runtime = (time.perf_counter() - t0) * 1e3
    pos = _position(cal, truth, result.focus_time)
    if pos is not None:
        result = result.located(pos)
    error = None
    if truth is not None and pos is not None:
        error = pos - _position(cal, truth, truth["ground_truth_time_us"])
    return result, evio.FocusReport.from_result(result, runtime, error, source)


def cmd_focus(args) -> int:
    opts = _focus_options(args)
    seq, truth, cal, _ = _sequence(args)
    methods = METHODS if args.method == "all" else (args.method,)
    reports = []
    for method in methods:
        result, report = _focus_one(seq, truth, cal, method, opts, Path(args.input).name)
        reports.append(report)
        for w in result.warnings:
            _warn(f"{method}: {w}")
        if args.dump_curves and "curve" in result.diagnostics:
            curve = result.diagnostics["curve"]
            stem = Path(args.dump_curves)
            stem.parent.mkdir(parents=True, exist_ok=True)
            evio.write_curve(stem.with_name(f"{stem.name}.{method}.mse.csv"), curve.shifts, curve.values)
        if args.out:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            evio.write_report(out / f"{Path(args.input).stem}.{method}.json", report)
    if args.dump_curves:
        evio.write_epr(Path(args.dump_curves).with_name(Path(args.dump_curves).name + ".epr.csv"), seq)
    if args.table:
        print(_report_table(reports))
    else:
        _emit(reports[0].to_dict() if len(reports) == 1 else [r.to_dict() for r in reports])
    return EXIT_OK


def _fmt(v, spec=".2f") -> str:
    return "-" if v is None else format(v, spec)


def _report_table(reports) -> str:
    rows = [("method", "focus_time_us", "position_um", "error_um", "runtime_ms")]
    for r in reports:
        rows.append((r.method, _fmt(r.focus_time_us, ".1f"), _fmt(r.position_um),
                     _fmt(r.error_um), _fmt(r.runtime_ms, ".3f")))
    return _align(rows)


def _align(rows) -> str:
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(str(c).rjust(w) if i else str(c).ljust(w) for i, (c, w) in enumerate(zip(r, widths)))
             for r in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


# --------------------------------------------------------------- bench

def synthetic_sequence(n_bins: int, seed: int = 0, dt: int = DEFAULT_DT_US) -> EprSequence:
    """Noisy mirrored bump pair with the focus near the middle."""
    rng = np.random.default_rng(seed)
    i = np.arange(n_bins)
    c, w = n_bins / 2.0, n_bins / 8.0
    per = 200 * np.exp(-0.5 * ((i - c - w / 2) / w) ** 2)
    ner = per[::-1].copy()
    return EprSequence(0, dt, rng.poisson(per + 5.0), rng.poisson(ner + 5.0))


def _median_ms(fn, reps: int) -> tuple[float, list[float]]:
    samples = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        samples.append((time.perf_counter() - t0) * 1e3)
    return statistics.median(samples), samples


def cmd_bench(args) -> int:
    _need(args.reps >= 1, "--reps", "must be >= 1")
    opts = _focus_options(args)
    if args.synthetic_bins is not None:
        _need(args.synthetic_bins >= 8, "--synthetic-bins", "must be >= 8")
        seq, stream, roi = synthetic_sequence(args.synthetic_bins, _seed(args)), None, None
    else:
        if args.input is None:
            raise UsageError("give an event file or --synthetic-bins")
        path = Path(args.input)
        if not path.exists():
            raise FileNotFoundError(f"no such file: {path}")
        stream = evio.read_events(path)
        roi = Roi.parse(args.roi) if args.roi else None
        seq = bin_events(stream, roi, args.dt)

    t0 = time.perf_counter()
    run_focus(seq, args.method, opts)  # first call pays JIT and filter loading
    warmup = (time.perf_counter() - t0) * 1e3
    core, samples = _median_ms(lambda: run_focus(seq, args.method, opts), args.reps)
    with_binning = None
    if stream is not None:
        with_binning, _ = _median_ms(
            lambda: run_focus(bin_events(stream, roi, args.dt), args.method, opts), args.reps
        )
    low = args.reps < 10
    if low:
        _warn(f"only {args.reps} repetition(s): timing is low-confidence")
    _emit({
        "method": args.method,
        "n_bins": seq.n,
        "reps": args.reps,
        "core_median_ms": core,
        "core_min_ms": min(samples),
        "with_binning_median_ms": with_binning,
        "warmup_ms": warmup,
        "low_confidence": low,
    })
    return EXIT_OK


# --------------------------------------------------------------- eval

def summarize(reports) -> dict:
    def stats(errors, runtimes):
        errs = np.asarray(errors, dtype=np.float64)
        return {
            "n": int(errs.size),
            "mae_um": float(np.mean(np.abs(errs))),
            "rmse_um": float(math.sqrt(np.mean(errs ** 2))),
            "mean_runtime_ms": float(np.mean(runtimes)),
        }

    by_method: dict[str, list] = {}
    for r in reports:
        by_method.setdefault(r.method, []).append(r)
    return {
        "methods": {m: stats([r.error_um for r in rs], [r.runtime_ms for r in rs])
                    for m, rs in sorted(by_method.items())},
        "overall": stats([r.error_um for r in reports], [r.runtime_ms for r in reports]),
    }


def _eval_table(reports, summary) -> str:
    methods = sorted(summary["methods"])
    table: dict[str, dict] = {}
    for r in reports:
        table.setdefault(r.source or "?", {})[r.method] = r.error_um
    rows = [("sequence", *(f"{m} error/um" for m in methods))]
    for source in sorted(table):
        rows.append((source, *(_fmt(table[source].get(m), ".1f") for m in methods)))
    rows.append(("MAE", *(_fmt(summary["methods"][m]["mae_um"], ".1f") for m in methods)))
    rows.append(("RMSE", *(_fmt(summary["methods"][m]["rmse_um"], ".1f") for m in methods)))
    rows.append(("time/ms", *(_fmt(summary["methods"][m]["mean_runtime_ms"], ".2f") for m in methods)))
    return _align(rows)


def load_reports(directory) -> list:
    d = Path(directory)
    if not d.is_dir():
        raise FileNotFoundError(f"no such directory: {d}")
    reports = []
    for p in sorted(d.glob("*.json")):
        try:
            data = json.loads(p.read_text(encoding="utf-8"))
        except json.JSONDecodeError:
            continue
        if isinstance(data, dict) and "method" in data and data.get("error_um") is not None:
            reports.append(evio.FocusReport.from_dict(data))
    return reports


def cmd_eval(args) -> int:
    reports = load_reports(args.directory)
    if not reports:
        raise ValueError(f"{args.directory}: no focus reports with error_um")
    summary = summarize(reports)
    if args.table:
        print(_eval_table(reports, summary))
    else:
        _emit(summary)
    return EXIT_OK


# --------------------------------------------------------------- suite

SUITE_PATTERNS = ("step", "bars", "checker", "digits")
SUITE_SPEEDS = (10_000.0, 5_000.0)
SUITE_F_NUMBERS = (1.4, 2.8)


def cmd_suite(args) -> int:
    """Simulate a 16-fixture grid and write pbf/egs reports into one directory."""
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    opts = FocusOptions()
    count = 0
    for pattern in SUITE_PATTERNS:
        for speed in SUITE_SPEEDS:
            for fn in SUITE_F_NUMBERS:
                name = f"{pattern}-v{int(speed / 1000)}-F{fn}"
                optics = OpticsConfig.from_f_number(35_000, fn, 1_000_000)
                steps = int(round(600 / speed * 1e4)) + 1  # ten steps per millisecond
                sweep = SweepConfig(-300, 300, speed, steps)
                stream, gt = simulate_sweep(make_pattern(pattern), optics, sweep)
                window = (0, int(sweep.step_times.max()) + 1)
                seq = bin_events(stream, None, DEFAULT_DT_US, *window)
                truth = {"ground_truth_time_us": gt, "speed_um_s": speed, "dv_start_um": -300.0,
                         "dv_end_um": 300.0, "window_us": list(window)}
                for method in args.methods:
                    _, report = _focus_one(seq, truth, None, method, opts, name)
                    evio.write_report(out / f"{name}.{method}.json", report)
                count += 1
    _emit({"directory": str(out), "fixtures": count, "methods": list(args.methods)})
    return EXIT_OK


# --------------------------------------------------------------- parser

def _add_focus_flags(p) -> None:
    p.add_argument("--k", type=float, default=0.5, help="investigation factor (default 0.5)")
    p.add_argument("--norm", choices=[m.value for m in NormalizationMode], default="unit-sum")
    p.add_argument("--wavelet", choices=available(), default="dmey")
    p.add_argument("--levels", type=int, default=6, help="wavelet levels (default 6)")
    p.add_argument("--window-s", type=float, default=0.055, help="egs smoothing window in seconds")
    p.add_argument("--tol-bins", type=int, default=1, help="egs bracket tolerance")


def _add_binning_flags(p) -> None:
    p.add_argument("--dt", type=int, default=DEFAULT_DT_US, help="bin width in us (default 1000)")
    p.add_argument("--roi", help="x0,y0,w,h")
    p.add_argument("--t-start", type=int)
    p.add_argument("--t-end", type=int)


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    parser = argparse.ArgumentParser(prog="evfocus", description="Polarity-symmetry autofocus for event cameras.")
    parser.add_argument("--version", action="version", version=f"evfocus {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    p = sub.add_parser("simulate", help="simulate a focus sweep")
    p.add_argument("--config", help="flat key = value file; flags override it")
    p.add_argument("--pattern", choices=PATTERNS, default="step")
    p.add_argument("--scene", help="binary PGM image instead of a pattern")
    p.add_argument("--width", type=int, default=64)
    p.add_argument("--height", type=int, default=48)
    p.add_argument("--lo", type=float, default=0.05, help="dark intensity")
    p.add_argument("--hi", type=float, default=1.0, help="bright intensity")
    p.add_argument("--f-mm", type=float, default=35.0)
    p.add_argument("--f-number", type=float, default=1.4)
    p.add_argument("--u-mm", type=float, default=1000.0, help="object distance")
    p.add_argument("--pitch-um", type=float, default=18.5)
    p.add_argument("--dv-start", type=float, default=-300.0)
    p.add_argument("--dv-end", type=float, default=300.0)
    p.add_argument("--speed", type=float, default=10_000.0, help="um/s")
    p.add_argument("--steps", type=int, default=601)
    p.add_argument("--t-start", type=int, default=0)
    p.add_argument("--c-pos", type=float, default=0.2)
    p.add_argument("--c-neg", type=float, default=0.2)
    p.add_argument("--residual", choices=("carry", "snap"), default="carry")
    p.add_argument("--dark-rate", type=float, default=0.0, help="Hz per pixel")
    p.add_argument("--aps-period", type=float, default=0.0, help="seconds")
    p.add_argument("--aps-amplitude", type=int, default=0, help="events per burst")
    p.add_argument("--strobe-freq", type=float, default=0.0, help="Hz")
    p.add_argument("--strobe-depth", type=float, default=0.0, help="log-intensity step")
    p.add_argument("--roi", help="x0,y0,w,h")
    p.add_argument("--seed", type=int, help="falls back to $EVFOCUS_SEED, then 0")
    p.add_argument("--out", default="events.evaf", help=".csv/.txt for text, anything else binary")
    p.set_defaults(func=cmd_simulate)
    subs["simulate"] = p

    p = sub.add_parser("bin", help="bin events into an EPR CSV")
    p.add_argument("input")
    p.add_argument("--config")
    _add_binning_flags(p)
    p.add_argument("--out", default="epr.csv")
    p.add_argument("--no-sidecars", action="store_true")
    p.add_argument("--truth")
    p.add_argument("--calibration")
    p.set_defaults(func=cmd_bin)
    subs["bin"] = p

    p = sub.add_parser("focus", help="locate focus in an event file or EPR CSV")
    p.add_argument("input")
    p.add_argument("--config")
    p.add_argument("--method", choices=METHODS + ("all",), default="pbf")
    _add_binning_flags(p)
    _add_focus_flags(p)
    p.add_argument("--truth", help="ground-truth sidecar (default <input>.truth.json)")
    p.add_argument("--calibration", help="t_us,position_um CSV (default <input>.cal.csv)")
    p.add_argument("--no-sidecars", action="store_true", help="ignore sidecars next to the input")
    p.add_argument("--dump-curves", help="path prefix for MSE curve and EPR CSVs")
    p.add_argument("--out", help="directory for report JSON files")
    p.add_argument("--table", action="store_true", help="print a text table instead of JSON")
    p.set_defaults(func=cmd_focus)
    subs["focus"] = p

    p = sub.add_parser("bench", help="time the focus pipeline")
    p.add_argument("input", nargs="?")
    p.add_argument("--config")
    p.add_argument("--synthetic-bins", type=int, help="benchmark a generated sequence of this length")
    p.add_argument("--method", choices=METHODS, default="pbf")
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--seed", type=int)
    p.add_argument("--dt", type=int, default=DEFAULT_DT_US)
    p.add_argument("--roi")
    _add_focus_flags(p)
    p.set_defaults(func=cmd_bench)
    subs["bench"] = p

    p = sub.add_parser("eval", help="MAE/RMSE over a directory of reports")
    p.add_argument("directory")
    p.add_argument("--config")
    p.add_argument("--table", action="store_true")
    p.set_defaults(func=cmd_eval)
    subs["eval"] = p

    p = sub.add_parser("suite", help="simulate the 16-fixture grid and write reports")
    p.add_argument("--config")
    p.add_argument("--out", default="suite")
    p.add_argument("--methods", nargs="+", choices=METHODS, default=["pbf", "egs"])
    p.set_defaults(func=cmd_suite)
    subs["suite"] = p
    return parser, subs


def _coerce(action, raw: str):
    if isinstance(action, argparse._StoreTrueAction):
        low = raw.lower()
        if low not in ("true", "false", "1", "0", "yes", "no"):
            raise ConfigError(f"{action.dest}: expected a boolean, got {raw!r}")
        return low in ("true", "1", "yes")
    value = action.type(raw) if action.type else raw
    if action.choices is not None and value not in action.choices:
        raise ConfigError(f"{action.dest}: {raw!r} is not one of {', '.join(map(str, action.choices))}")
    return value


def _apply_config(sub: argparse.ArgumentParser, path: str) -> None:
    values = load_config(path)
    actions = {a.dest: a for a in sub._actions if a.dest not in ("help", "config")}
    defaults = {}
    for key, raw in values.items():
        if key not in actions or not actions[key].option_strings:
            raise ConfigError(f"{path}: unknown key {key!r}")
        try:
            defaults[key] = _coerce(actions[key], raw)
        except ValueError as exc:
            raise ConfigError(f"{path}: --{key.replace('_', '-')}: {exc}") from None
    sub.set_defaults(**defaults)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subs = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(args, "config", None):
            if not Path(args.config).exists():
                raise FileNotFoundError(f"no such file: {args.config}")
            _apply_config(subs[args.command], args.config)
            args = parser.parse_args(argv)
        return args.func(args)
    except (UsageError, ConfigError, evio.FormatError) as exc:
        print(f"evfocus {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        name = getattr(exc, "filename", None)
        msg = f"{exc.strerror}: {name}" if name and exc.strerror else str(exc)
        print(f"evfocus {args.command}: error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"evfocus {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
