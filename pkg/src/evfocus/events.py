"""Event-stream data model shared by every other module.

Streams are stored column-wise (numpy arrays) and frozen after
construction: the arrays are flagged read-only so a stream can be handed
to several threads without copies.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Iterator, NamedTuple

import numpy as np


class Polarity(IntEnum):
    POSITIVE = 1
    NEGATIVE = -1


class Event(NamedTuple):
    t: int  # microseconds since stream epoch
    x: int
    y: int
    polarity: Polarity


@dataclass(frozen=True)
class SensorGeometry:
    width: int
    height: int

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f"sensor must be at least 1x1, got {self.width}x{self.height}")

    @property
    def n_pixels(self) -> int:
        return self.width * self.height


DAVIS346 = SensorGeometry(346, 260)


@dataclass(frozen=True)
class Roi:
    """Pixel rectangle, top-left inclusive: x0 <= x < x0 + w, y0 <= y < y0 + h."""

    x0: int
    y0: int
    w: int
    h: int

    def __post_init__(self):
        if self.w < 1 or self.h < 1:
            raise ValueError(f"ROI extent must be >= 1, got w={self.w} h={self.h}")
        if self.x0 < 0 or self.y0 < 0:
            raise ValueError(f"ROI origin must be >= 0, got ({self.x0}, {self.y0})")

    @classmethod
    def full(cls, sensor: SensorGeometry) -> "Roi":
        return cls(0, 0, sensor.width, sensor.height)

    @classmethod
    def parse(cls, text: str) -> "Roi":
        """Parse ``"x0,y0,w,h"``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"ROI must be 'x0,y0,w,h', got {text!r}")
        return cls(*(int(p) for p in parts))

    def fits(self, sensor: SensorGeometry) -> bool:
        return self.x0 + self.w <= sensor.width and self.y0 + self.h <= sensor.height

    def check(self, sensor: SensorGeometry) -> None:
        if not self.fits(sensor):
            raise ValueError(
                f"ROI {self} lies outside the {sensor.width}x{sensor.height} sensor"
            )

    def contains(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return (x >= self.x0) & (x < self.x0 + self.w) & (y >= self.y0) & (y < self.y0 + self.h)


def _frozen(a, dtype) -> np.ndarray:
    arr = np.array(a, dtype=dtype, copy=True).reshape(-1)
    arr.setflags(write=False)
    return arr


class EventStream:
    """Time-ordered events on a sensor, held as four parallel columns.

    ``t`` is int64 microseconds, ``x``/``y`` are int32 pixel indices and
    ``p`` holds polarity as int8 (+1/-1). Construction does not validate;
    call :func:`validate` on untrusted input.
    """

    __slots__ = ("sensor", "t", "x", "y", "p")

    def __init__(self, sensor: SensorGeometry, t, x, y, p):
        t, x, y, p = (
            _frozen(t, np.int64),
            _frozen(x, np.int32),
            _frozen(y, np.int32),
            _frozen(p, np.int8),
        )
        if not (len(t) == len(x) == len(y) == len(p)):
            raise ValueError("event columns differ in length")
        object.__setattr__(self, "sensor", sensor)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("EventStream is immutable")

    @classmethod
    def empty(cls, sensor: SensorGeometry) -> "EventStream":
        return cls(sensor, [], [], [], [])

    @classmethod
    def from_events(cls, sensor: SensorGeometry, events) -> "EventStream":
        events = list(events)
        if not events:
            return cls.empty(sensor)
        t, x, y, p = zip(*((e.t, e.x, e.y, int(e.polarity)) for e in events))
        return cls(sensor, t, x, y, p)

    def __len__(self) -> int:
        return len(self.t)

    def __iter__(self) -> Iterator[Event]:
        for t, x, y, p in zip(self.t.tolist(), self.x.tolist(), self.y.tolist(), self.p.tolist()):
            yield Event(t, x, y, Polarity(p))

    def __getitem__(self, i: int) -> Event:
        return Event(int(self.t[i]), int(self.x[i]), int(self.y[i]), Polarity(int(self.p[i])))

    def __eq__(self, other) -> bool:
        if not isinstance(other, EventStream):
            return NotImplemented
        return (
            self.sensor == other.sensor
            and np.array_equal(self.t, other.t)
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.y, other.y)
            and np.array_equal(self.p, other.p)
        )

    __hash__ = None

    def __repr__(self) -> str:
        span = f"{self.t[0]}..{self.t[-1]} us" if len(self) else "empty"
        return f"EventStream({self.sensor.width}x{self.sensor.height}, {len(self)} events, {span})"

    def select(self, mask_or_index) -> "EventStream":
        return EventStream(
            self.sensor, self.t[mask_or_index], self.x[mask_or_index],
            self.y[mask_or_index], self.p[mask_or_index],
        )

    def time_window(self, t_start: int, t_end: int) -> "EventStream":
        lo, hi = np.searchsorted(self.t, [t_start, t_end], side="left")
        return self.select(slice(lo, hi))

    @property
    def n_positive(self) -> int:
        return int(np.count_nonzero(self.p > 0))

    @property
    def n_negative(self) -> int:
        return int(np.count_nonzero(self.p < 0))


def concatenate(streams, sensor: SensorGeometry | None = None) -> EventStream:
    """Merge streams and stable-sort by timestamp (earlier streams win ties)."""
    streams = list(streams)
    sensor = sensor or streams[0].sensor
    t = np.concatenate([s.t for s in streams])
    order = np.argsort(t, kind="stable")
    cat = lambda name: np.concatenate([getattr(s, name) for s in streams])[order]  # noqa: E731
    return EventStream(sensor, t[order], cat("x"), cat("y"), cat("p"))


def validate(stream: EventStream) -> list[str]:
    """Return one message per broken invariant, naming the first offending index."""
    problems = []
    w, h = stream.sensor.width, stream.sensor.height
    checks = [
        ("negative timestamp", stream.t < 0),
        ("x out of bounds", (stream.x < 0) | (stream.x >= w)),
        ("y out of bounds", (stream.y < 0) | (stream.y >= h)),
        ("invalid polarity", (stream.p != 1) & (stream.p != -1)),
    ]
    if len(stream) > 1:
        back = np.zeros(len(stream), dtype=bool)
        back[1:] = np.diff(stream.t) < 0
        checks.insert(0, ("non-monotonic timestamp", back))
    for rule, bad in checks:
        idx = np.flatnonzero(bad)
        if idx.size:
            problems.append(f"{rule} at index {idx[0]}")
    return problems


def filter_roi(stream: EventStream, roi: Roi) -> EventStream:
    roi.check(stream.sensor)
    if roi == Roi.full(stream.sensor):
        return stream
    return stream.select(roi.contains(stream.x, stream.y))
