"""File formats: event streams (CSV and EVAF binary), calibration, reports.

Text events::

    # sensor 346x260          (optional, gives the sensor size)
    t_us,x,y,p
    100,5,7,1
    ...

Binary events (EVAF v1, little-endian): ``b"EVAF"``, u16 version, u16 width,
u16 height, u64 count, then ``count`` 14-byte records of u64 t_us, u16 x,
u16 y, i8 p, i8 pad.
"""

from __future__ import annotations

import hashlib
import io
import json
import math
import struct
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .epr import EprSequence
from .events import DAVIS346, EventStream, SensorGeometry, validate

TEXT_HEADER = "t_us,x,y,p"
CAL_HEADER = "t_us,position_um"
EPR_HEADER = "bin,t_us,per,ner"

MAGIC = b"EVAF"
VERSION = 1
_HEAD = struct.Struct("<4sHHHQ")
RECORD = np.dtype([("t", "<u8"), ("x", "<u2"), ("y", "<u2"), ("p", "i1"), ("pad", "i1")])
assert RECORD.itemsize == 14


class FormatError(ValueError):
    pass


# ---------------------------------------------------------------- text events

def events_to_text(stream: EventStream) -> str:
    cols = np.column_stack([stream.t, stream.x, stream.y, stream.p]).astype(np.int64)
    buf = io.StringIO()
    buf.write(f"# sensor {stream.sensor.width}x{stream.sensor.height}\n{TEXT_HEADER}\n")
    if len(stream):
        np.savetxt(buf, cols, fmt="%d", delimiter=",")
    return buf.getvalue()


def write_events_text(path, stream: EventStream) -> None:
    Path(path).write_text(events_to_text(stream), encoding="ascii")


def _parse_sensor(line: str) -> SensorGeometry:
    try:
        w, h = line.split()[2].lower().split("x")
        return SensorGeometry(int(w), int(h))
    except (IndexError, ValueError) as exc:
        raise FormatError(f"bad sensor line {line.strip()!r}") from exc


def _scan_rows(lines: list[str], first_line: int) -> None:
    """Slow path: find the first bad row and report its 1-based line number."""
    for offset, raw in enumerate(lines):
        line_no = first_line + offset
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        parts = text.split(",")
        if len(parts) != 4:
            raise FormatError(f"expected 4 fields, got {len(parts)}, line {line_no}")
        try:
            t, x, y, p = (int(v) for v in parts)
        except ValueError:
            raise FormatError(f"non-integer field, line {line_no}") from None
        if p not in (1, -1):
            raise FormatError(f"invalid polarity, line {line_no}")
        if t < 0 or x < 0 or y < 0:
            raise FormatError(f"negative value, line {line_no}")


def read_events_text(path, sensor: SensorGeometry | None = None) -> EventStream:
    """Parse a ``t_us,x,y,p`` file; a ``# sensor WxH`` line overrides ``sensor``."""
    lines = Path(path).read_text(encoding="ascii").splitlines()
    i = 0
    while i < len(lines) and lines[i].startswith("#"):
        if lines[i].startswith("# sensor"):
            sensor = _parse_sensor(lines[i])
        i += 1
    if i >= len(lines) or lines[i].strip().replace(" ", "") != TEXT_HEADER:
        raise FormatError(f"{path}: missing header line {TEXT_HEADER!r}")
    body = lines[i + 1:]
    sensor = sensor or DAVIS346
    if not any(s.strip() for s in body):
        return EventStream.empty(sensor)
    try:
        data = np.loadtxt(body, delimiter=",", dtype=np.int64, comments="#", ndmin=2)
    except ValueError:
        _scan_rows(body, i + 2)
        raise
    if data.shape[1] != 4 or not np.isin(data[:, 3], (1, -1)).all() or (data[:, :3] < 0).any():
        _scan_rows(body, i + 2)
    stream = EventStream(sensor, data[:, 0], data[:, 1], data[:, 2], data[:, 3])
    _check(stream, path)
    return stream


def _check(stream: EventStream, path) -> None:
    problems = validate(stream)
    if problems:
        raise FormatError(f"{path}: " + "; ".join(problems))


# -------------------------------------------------------------- binary events

def events_to_bytes(stream: EventStream) -> bytes:
    w, h = stream.sensor.width, stream.sensor.height
    if w > 0xFFFF or h > 0xFFFF:
        raise FormatError(f"sensor {w}x{h} does not fit the u16 header fields")
    rec = np.zeros(len(stream), dtype=RECORD)
    rec["t"], rec["x"], rec["y"], rec["p"] = stream.t, stream.x, stream.y, stream.p
    return _HEAD.pack(MAGIC, VERSION, w, h, len(stream)) + rec.tobytes()


def write_events_binary(path, stream: EventStream) -> None:
    Path(path).write_bytes(events_to_bytes(stream))


def events_from_bytes(data: bytes, source="<bytes>") -> EventStream:
    if len(data) < _HEAD.size:
        raise FormatError(
            f"{source}: truncated header, expected {_HEAD.size} bytes, got {len(data)}"
        )
    magic, version, w, h, count = _HEAD.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"{source}: bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise FormatError(f"{source}: unsupported version {version}")
    expected = _HEAD.size + count * RECORD.itemsize
    if len(data) != expected:
        kind = "truncated file" if len(data) < expected else "trailing bytes"
        raise FormatError(f"{source}: {kind}, expected {expected} bytes, got {len(data)}")
    rec = np.frombuffer(data, dtype=RECORD, count=count, offset=_HEAD.size)
    if count and rec["t"].max() > np.iinfo(np.int64).max:
        raise FormatError(f"{source}: timestamp exceeds int64")
    stream = EventStream(SensorGeometry(w, h), rec["t"].astype(np.int64), rec["x"], rec["y"], rec["p"])
    _check(stream, source)
    return stream


def read_events_binary(path) -> EventStream:
    return events_from_bytes(Path(path).read_bytes(), source=path)


def read_events(path, sensor: SensorGeometry | None = None) -> EventStream:
    """Dispatch on content: EVAF magic means binary, anything else is text."""
    with open(path, "rb") as fh:
        head = fh.read(4)
    if head == MAGIC:
        return read_events_binary(path)
    return read_events_text(path, sensor)


def write_events(path, stream: EventStream) -> None:
    if str(path).endswith((".csv", ".txt")):
        write_events_text(path, stream)
    else:
        write_events_binary(path, stream)


def canonical_sha256(stream: EventStream) -> str:
    """Digest of the canonical text serialization."""
    return hashlib.sha256(events_to_text(stream).encode("ascii")).hexdigest()


# ---------------------------------------------------------------- calibration

@dataclass(frozen=True, eq=False)
class Calibration:
    """Synchronized (timestamp, stage position) samples."""

    t_us: np.ndarray
    position_um: np.ndarray

    def __post_init__(self):
        t = np.array(self.t_us, dtype=np.float64)
        pos = np.array(self.position_um, dtype=np.float64)
        if t.ndim != 1 or t.shape != pos.shape:
            raise ValueError("calibration needs equal-length 1-D time and position arrays")
        if len(t) < 2:
            raise ValueError(f"calibration needs at least 2 samples, got {len(t)}")
        if not (np.isfinite(t).all() and np.isfinite(pos).all()):
            raise ValueError("calibration samples must be finite")
        if not (np.diff(t) > 0).all():
            raise ValueError("calibration times must be strictly increasing")
        step = np.diff(pos)
        if not ((step >= 0).all() or (step <= 0).all()):
            raise ValueError("calibration positions must be monotone across the sweep")
        t.setflags(write=False)
        pos.setflags(write=False)
        object.__setattr__(self, "t_us", t)
        object.__setattr__(self, "position_um", pos)

    @classmethod
    def linear(cls, t_start: float, t_end: float, pos_start: float, pos_end: float, samples: int = 2):
        return cls(np.linspace(t_start, t_end, samples), np.linspace(pos_start, pos_end, samples))


def time_to_position(cal: Calibration, t_us: float) -> float:
    """Piecewise-linear position at ``t_us``; extrapolation is refused."""
    t = float(t_us)
    lo, hi = cal.t_us[0], cal.t_us[-1]
    if not lo <= t <= hi:
        raise ValueError(f"t = {t:g} us is outside calibrated window [{lo:g}, {hi:g}]")
    i = int(np.searchsorted(cal.t_us, t, side="right")) - 1
    if i >= len(cal.t_us) - 1:
        return float(cal.position_um[-1])
    t0, t1 = cal.t_us[i], cal.t_us[i + 1]
    p0, p1 = cal.position_um[i], cal.position_um[i + 1]
    if t == t0:
        return float(p0)
    return float(p0 + (p1 - p0) * ((t - t0) / (t1 - t0)))


def read_calibration(path) -> Calibration:
    lines = Path(path).read_text(encoding="ascii").splitlines()
    if not lines or lines[0].strip().replace(" ", "") != CAL_HEADER:
        raise FormatError(f"{path}: missing header line {CAL_HEADER!r}")
    try:
        data = np.loadtxt(lines[1:], delimiter=",", dtype=np.float64, ndmin=2)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from None
    if data.shape[1] != 2:
        raise FormatError(f"{path}: expected 2 columns, got {data.shape[1]}")
    return Calibration(data[:, 0], data[:, 1])


def write_calibration(path, cal: Calibration) -> None:
    rows = "".join(f"{t!r},{p!r}\n" for t, p in zip(cal.t_us.tolist(), cal.position_um.tolist()))
    Path(path).write_text(f"{CAL_HEADER}\n{rows}", encoding="ascii")


# --------------------------------------------------------------------- EPR

def write_epr(path, seq: EprSequence) -> None:
    t = (seq.t0 + np.arange(seq.n, dtype=np.int64) * seq.dt).tolist()
    per, ner = seq.per.tolist(), seq.ner.tolist()
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"# dt_us {seq.dt}\n{EPR_HEADER}\n")
        for i in range(seq.n):
            fh.write(f"{i},{t[i]},{per[i]!r},{ner[i]!r}\n")


def read_epr(path) -> EprSequence:
    lines = Path(path).read_text(encoding="ascii").splitlines()
    dt = None
    i = 0
    while i < len(lines) and lines[i].startswith("#"):
        if lines[i].startswith("# dt_us"):
            dt = int(lines[i].split()[2])
        i += 1
    if i >= len(lines) or lines[i].strip() != EPR_HEADER:
        raise FormatError(f"{path}: missing header line {EPR_HEADER!r}")
    try:
        data = np.loadtxt(lines[i + 1:], delimiter=",", dtype=np.float64, ndmin=2)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from None
    if len(data) == 0:
        raise FormatError(f"{path}: no bins")
    t = data[:, 1].astype(np.int64)
    if dt is None:
        if len(t) < 2:
            raise FormatError(f"{path}: cannot infer bin width from one row")
        dt = int(t[1] - t[0])
    return EprSequence(t0=int(t[0]), dt=dt, per=data[:, 2], ner=data[:, 3])


def write_curve(path, shifts, values) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write("a,mse\n")
        for a, v in zip(np.asarray(shifts).tolist(), np.asarray(values).tolist()):
            fh.write(f"{a},{v!r}\n")


# ------------------------------------------------------------------ reports

def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items() if _jsonable(v) is not _SKIP}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        v = float(value)
        return v if math.isfinite(v) else None
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if value is None or isinstance(value, (str, int, bool)):
        return value
    return _SKIP


_SKIP = object()


@dataclass
class FocusReport:
    method: str
    focus_time_us: float
    runtime_ms: float
    position_um: float | None = None
    error_um: float | None = None
    focus_bin: float | None = None
    source: str | None = None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.runtime_ms >= 0:
            raise ValueError(f"runtime_ms must be >= 0, got {self.runtime_ms}")

    @classmethod
    def from_result(cls, result, runtime_ms: float, error_um=None, source=None) -> "FocusReport":
        return cls(
            method=result.method,
            focus_time_us=float(result.focus_time),
            runtime_ms=float(runtime_ms),
            position_um=result.position_um,
            error_um=error_um,
            focus_bin=float(result.focus_bin),
            source=source,
            diagnostics=_jsonable(result.diagnostics),
        )

    def to_dict(self) -> dict:
        return _jsonable(asdict(self))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "FocusReport":
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in data.items() if k in known})


def write_report(path, report: FocusReport) -> None:
    Path(path).write_text(report.to_json() + "\n", encoding="utf-8")


def read_report(path) -> FocusReport:
    return FocusReport.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
