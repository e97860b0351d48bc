"""Noise sources layered on top of a clean sweep.

Dark noise is per-pixel Poisson with random polarity, APS readout shows up
as periodic bursts of mixed-polarity events, and a strobe is a global
square-wave offset in log intensity pushed through the threshold rule.
All randomness comes from one Philox stream keyed by the seed, drawn in a
fixed order.
"""

from __future__ import annotations

import math

import numpy as np

from ..events import EventStream, Roi, concatenate
from .generator import EventGenConfig, _exceeded


def _pixels(stream: EventStream, roi: Roi | None):
    roi = roi or Roi.full(stream.sensor)
    ys, xs = np.mgrid[roi.y0:roi.y0 + roi.h, roi.x0:roi.x0 + roi.w]
    return xs.ravel().astype(np.int32), ys.ravel().astype(np.int32)


def dark_noise(rng, xs, ys, rate_hz: float, t_start: int, t_end: int):
    span_s = (t_end - t_start) / 1e6
    counts = rng.poisson(rate_hz * span_s, size=len(xs))
    total = int(counts.sum())
    t = rng.integers(t_start, t_end, size=total, dtype=np.int64)
    p = np.where(rng.random(total) < 0.5, 1, -1).astype(np.int8)
    return t, np.repeat(xs, counts), np.repeat(ys, counts), p


def aps_bursts(rng, xs, ys, period_s: float, amplitude: int, t_start: int, t_end: int):
    period_us = period_s * 1e6
    stamps = t_start + period_us * np.arange(1, math.ceil((t_end - t_start) / period_us) + 1)
    stamps = np.rint(stamps[stamps < t_end]).astype(np.int64)
    total = len(stamps) * amplitude
    pick = rng.integers(0, len(xs), size=total)
    p = np.where(rng.random(total) < 0.5, 1, -1).astype(np.int8)
    return np.repeat(stamps, amplitude), xs[pick], ys[pick], p


def strobe_events(xs, ys, freq_hz: float, depth: float, c_pos: float, c_neg: float, t_start: int, t_end: int):
    """Square wave starting dark at ``t_start``; every edge shifts all pixels by +/-depth."""
    half_us = 0.5e6 / freq_hz
    edges = t_start + half_us * np.arange(1, math.ceil((t_end - t_start) / half_us) + 1)
    edges = np.rint(edges[edges < t_end]).astype(np.int64)
    ts, ps, reps = [], [], []
    level = ref = 0.0  # every pixel sees the same offset, so one reference suffices
    for i, t in enumerate(edges):
        level += depth if i % 2 == 0 else -depth
        d = level - ref
        if d > 0:
            n, pol = int(_exceeded(np.array(d / c_pos))), 1
            ref += n * c_pos
        else:
            n, pol = int(_exceeded(np.array(-d / c_neg))), -1
            ref -= n * c_neg
        if n:
            ts.append(np.full(len(xs) * n, t, dtype=np.int64))
            ps.append(np.full(len(xs) * n, pol, dtype=np.int8))
            reps.append(n)
    if not ts:
        return None
    # pixel order: row-major, each pixel's n events adjacent
    x = np.concatenate([np.repeat(xs, n) for n in reps])
    y = np.concatenate([np.repeat(ys, n) for n in reps])
    return np.concatenate(ts), x, y, np.concatenate(ps)


def inject_noise(
    stream: EventStream,
    gen: EventGenConfig,
    window: tuple[int, int],
    seed: int | None = None,
    roi: Roi | None = None,
) -> EventStream:
    """Add the noise configured in ``gen.noise`` over ``[t_start, t_end)``.

    Noise lands on every sensor pixel unless ``roi`` restricts it. The result
    is re-sorted by time, original events first within a timestamp.
    """
    cfg = gen.noise
    if not cfg.active:
        return stream
    t_start, t_end = int(window[0]), int(window[1])
    if t_end <= t_start:
        raise ValueError(f"empty noise window [{t_start}, {t_end})")
    rng = np.random.Generator(np.random.Philox(cfg.seed if seed is None else seed))
    xs, ys = _pixels(stream, roi)

    parts = [stream]
    sensor = stream.sensor
    if cfg.dark_rate_hz > 0:
        parts.append(EventStream(sensor, *dark_noise(rng, xs, ys, cfg.dark_rate_hz, t_start, t_end)))
    if cfg.aps_period_s > 0 and cfg.aps_amplitude > 0:
        parts.append(EventStream(
            sensor, *aps_bursts(rng, xs, ys, cfg.aps_period_s, cfg.aps_amplitude, t_start, t_end)
        ))
    if cfg.strobe_freq_hz > 0 and cfg.strobe_log_depth > 0:
        cols = strobe_events(
            xs, ys, cfg.strobe_freq_hz, cfg.strobe_log_depth, gen.c_pos, gen.c_neg, t_start, t_end
        )
        if cols is not None:
            parts.append(EventStream(sensor, *cols))
    return concatenate(parts, sensor)
