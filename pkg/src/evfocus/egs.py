"""Event-rate baseline: the focus is taken where the smoothed event rate peaks.

The rate is smoothed with a moving average and its maximum located with a
golden-section search over bin indices, under a unimodality assumption.
A full argmax scan runs alongside purely as a diagnostic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .epr import EprSequence
from .pbf import FocusResult

DEFAULT_WINDOW_S = 0.055
DEFAULT_TOL_BINS = 1

INV_PHI = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True, eq=False)
class ErSequence:
    t0: int
    dt: int
    er: np.ndarray

    def __post_init__(self):
        er = np.array(self.er, dtype=np.float64).reshape(-1)
        er.setflags(write=False)
        object.__setattr__(self, "er", er)
        if len(er) < 1:
            raise ValueError("event-rate sequence is empty")
        if (er < 0).any():
            raise ValueError("event rates must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.er)


def er_sequence(seq: EprSequence) -> ErSequence:
    return ErSequence(seq.t0, seq.dt, seq.per + seq.ner)


def _golden_max(f, lo: int, hi: int, tol: int) -> tuple[int, int]:
    """Shrink the integer bracket [lo, hi] around a maximum of f until hi - lo <= tol.

    Probe points are rounded golden-ratio cuts; values are cached so the
    probe shared between consecutive brackets is evaluated once.
    """
    seen: dict[int, float] = {}

    def g(i: int) -> float:
        if i not in seen:
            seen[i] = f(i)
        return seen[i]

    while hi - lo > tol:
        span = hi - lo
        c = lo + int(round((1 - INV_PHI) * span))
        d = lo + int(round(INV_PHI * span))
        if d <= c:
            d = c + 1
        if g(c) >= g(d):
            hi = d - 1
        else:
            lo = c + 1
    return lo, hi


def egs_focus(
    er: ErSequence,
    window_s: float = DEFAULT_WINDOW_S,
    tol_bins: int = DEFAULT_TOL_BINS,
) -> FocusResult:
    if er.n < 3:
        raise ValueError(f"need at least 3 bins, got {er.n}")
    if window_s <= 0:
        raise ValueError(f"smoothing window must be positive, got {window_s}")
    if tol_bins < 1:
        raise ValueError(f"tol_bins must be >= 1, got {tol_bins}")
    width = max(1, int(round(window_s * 1e6 / er.dt)))
    if width > er.n:
        raise ValueError(f"smoothing window of {width} bins is wider than the {er.n}-bin sequence")

    smooth = np.convolve(er.er, np.full(width, 1.0 / width), mode="valid")
    offset = (width - 1) / 2.0  # smooth[i] is centred on bin i + offset

    calls = 0

    def f(i: int) -> float:
        nonlocal calls
        calls += 1
        return float(smooth[i])

    warnings = []
    global_best = int(np.argmax(smooth))
    if float(np.ptp(smooth)) == 0.0:
        lo, hi = 0, len(smooth) - 1
        best = (len(smooth) - 1) / 2.0
        violated = True
        warnings.append("flat event rate: no maximum to search, reporting sequence centre")
    else:
        lo, hi = _golden_max(f, 0, len(smooth) - 1, tol_bins)
        best = (lo + hi) / 2.0
        violated = abs(best - global_best) > tol_bins
        if violated:
            warnings.append(
                f"unimodality violated: golden search settled at {best + offset:.1f}, "
                f"global maximum at {global_best + offset:.1f}"
            )
    focus_bin = best + offset
    return FocusResult(
        method="egs",
        focus_bin=focus_bin,
        focus_time=er.t0 + (focus_bin + 0.5) * er.dt,
        diagnostics={
            "window_bins": width,
            "bracket": [lo + offset, hi + offset],
            "evaluations": calls,
            "global_argmax_bin": global_best + offset,
            "unimodality_violation": violated,
            "n_bins": er.n,
            "warnings": warnings,
        },
    )
