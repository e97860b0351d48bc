"""Event polarity rate (EPR) sequences: per-bin positive/negative counts."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .events import EventStream, Roi, filter_roi

DEFAULT_DT_US = 1000


class DegenerateChannelError(ValueError):
    """A polarity channel has no events, so it cannot be normalized."""


class NormalizationMode(str, Enum):
    NONE = "none"
    UNIT_SUM = "unit-sum"
    UNIT_MAX = "unit-max"


def _readonly(a) -> np.ndarray:
    arr = np.array(a, dtype=np.float64, copy=True).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class EprSequence:
    """Positive (``per``) and negative (``ner``) rates over ``n`` bins of ``dt`` us.

    Bin ``i`` covers ``[t0 + i*dt, t0 + (i+1)*dt)``. ``partial_final_bin``
    marks a last bin cut short by the acquisition window; its count is kept
    as is.
    """

    t0: int
    dt: int
    per: np.ndarray
    ner: np.ndarray
    partial_final_bin: bool = field(default=False)

    def __post_init__(self):
        per, ner = _readonly(self.per), _readonly(self.ner)
        object.__setattr__(self, "per", per)
        object.__setattr__(self, "ner", ner)
        if len(per) != len(ner) or len(per) < 1:
            raise ValueError(f"per/ner must be equal, non-empty lengths ({len(per)} vs {len(ner)})")
        if self.dt < 1:
            raise ValueError(f"bin width must be >= 1 us, got {self.dt}")
        if (per < 0).any() or (ner < 0).any():
            raise ValueError("EPR entries must be nonnegative")
        if not (np.isfinite(per).all() and np.isfinite(ner).all()):
            raise ValueError("EPR entries must be finite")

    @property
    def n(self) -> int:
        return len(self.per)

    @property
    def t_end(self) -> int:
        return self.t0 + self.n * self.dt

    def bin_center(self, i) -> float:
        return self.t0 + (np.asarray(i, dtype=float) + 0.5) * self.dt

    def __eq__(self, other) -> bool:
        if not isinstance(other, EprSequence):
            return NotImplemented
        return (
            (self.t0, self.dt, self.partial_final_bin)
            == (other.t0, other.dt, other.partial_final_bin)
            and np.array_equal(self.per, other.per)
            and np.array_equal(self.ner, other.ner)
        )

    __hash__ = None


def bin_events(
    stream: EventStream,
    roi: Roi | None = None,
    dt: int = DEFAULT_DT_US,
    t_start: int | None = None,
    t_end: int | None = None,
) -> EprSequence:
    """Count in-ROI events per polarity over ``[t_start, t_end)`` in bins of ``dt``.

    Without an explicit window the stream's own span ``[t_first, t_last + 1)``
    is used.
    """
    if roi is not None:
        stream = filter_roi(stream, roi)
    if t_start is None or t_end is None:
        if len(stream) == 0:
            raise ValueError("cannot infer a time window from an empty stream")
        t_start = int(stream.t[0]) if t_start is None else t_start
        t_end = int(stream.t[-1]) + 1 if t_end is None else t_end
    if dt < 1:
        raise ValueError(f"bin width must be >= 1 us, got {dt}")
    if t_end <= t_start:
        raise ValueError(f"empty time window [{t_start}, {t_end})")

    n = math.ceil((t_end - t_start) / dt)
    win = stream.time_window(t_start, t_end)
    idx = (win.t - t_start) // dt
    pos = win.p > 0
    per = np.bincount(idx[pos], minlength=n)
    ner = np.bincount(idx[~pos], minlength=n)
    return EprSequence(
        t0=int(t_start), dt=int(dt), per=per, ner=ner,
        partial_final_bin=(t_end - t_start) % dt != 0,
    )


def normalize(seq: EprSequence, mode: NormalizationMode | str) -> EprSequence:
    """Rescale each channel independently (unit area or unit peak)."""
    mode = NormalizationMode(mode)
    if mode is NormalizationMode.NONE:
        return seq
    reduce = np.sum if mode is NormalizationMode.UNIT_SUM else np.max
    scaled = []
    for name, arr in (("positive", seq.per), ("negative", seq.ner)):
        norm = reduce(arr)
        if not norm > 0:
            raise DegenerateChannelError(f"degenerate polarity channel: no {name} events")
        scaled.append(arr / norm)
    return replace(seq, per=scaled[0], ner=scaled[1])


def scale_channels(seq: EprSequence, positive: float = 1.0, negative: float = 1.0) -> EprSequence:
    return replace(seq, per=seq.per * positive, ner=seq.ner * negative)


def mirror(seq: EprSequence) -> EprSequence:
    """Reverse time and swap polarities, i.e. the same sweep run backwards."""
    return replace(seq, per=seq.ner[::-1], ner=seq.per[::-1])
