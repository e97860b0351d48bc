"""Focus-sweep event simulation.

The sensor plane travels through the image plane at constant speed. At each
step the scene is blurred by the defocus PSF, log-mapped, and compared per
pixel with the level at which that pixel last fired; every whole multiple
of the polarity threshold produces one event.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from ..events import EventStream, Roi, SensorGeometry
from .optics import OpticsConfig, gaussian_blur
from .scenes import Scene


@dataclass(frozen=True)
class SweepConfig:
    """Image-plane sweep from ``dv_start`` to ``dv_end`` (um) at ``speed`` um/s."""

    dv_start: float = -300.0
    dv_end: float = 300.0
    speed: float = 10_000.0
    steps: int = 601
    t_start: int = 0

    def __post_init__(self):
        if self.dv_start == self.dv_end:
            raise ValueError("sweep range is empty (dv_start == dv_end)")
        if self.speed <= 0:
            raise ValueError(f"sweep speed must be positive, got {self.speed}")
        if self.steps < 3:
            raise ValueError(f"need at least 3 sweep steps, got {self.steps}")
        if self.t_start < 0:
            raise ValueError("t_start must be >= 0")

    @property
    def defocus(self) -> np.ndarray:
        return np.linspace(self.dv_start, self.dv_end, self.steps)

    def time_at(self, dv) -> np.ndarray:
        """Exact (fractional) microsecond timestamp at which defocus ``dv`` is reached."""
        return self.t_start + np.abs(np.asarray(dv, dtype=float) - self.dv_start) / self.speed * 1e6

    @property
    def step_times(self) -> np.ndarray:
        return np.rint(self.time_at(self.defocus)).astype(np.int64)

    @property
    def ground_truth_time(self) -> float:
        return float(self.time_at(0.0))

    @property
    def duration_us(self) -> float:
        return abs(self.dv_end - self.dv_start) / self.speed * 1e6

    def position_at(self, t_us) -> np.ndarray:
        """Signed defocus (um) at time ``t_us``."""
        direction = 1.0 if self.dv_end > self.dv_start else -1.0
        return self.dv_start + direction * (np.asarray(t_us, dtype=float) - self.t_start) * self.speed / 1e6


@dataclass(frozen=True)
class NoiseConfig:
    dark_rate_hz: float = 0.0
    aps_period_s: float = 0.0
    aps_amplitude: int = 0
    strobe_freq_hz: float = 0.0
    strobe_log_depth: float = 0.0
    seed: int = 0

    def __post_init__(self):
        for name in ("dark_rate_hz", "aps_period_s", "aps_amplitude", "strobe_freq_hz", "strobe_log_depth"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")

    @property
    def active(self) -> bool:
        return (
            self.dark_rate_hz > 0
            or (self.aps_period_s > 0 and self.aps_amplitude > 0)
            or (self.strobe_freq_hz > 0 and self.strobe_log_depth > 0)
        )


@dataclass(frozen=True)
class EventGenConfig:
    """Log-intensity thresholds per polarity plus noise sources.

    ``residual="carry"`` advances a pixel's reference level by the emitted
    threshold multiples so sub-threshold change accumulates; ``"snap"``
    resets the reference to the current level whenever the pixel fires.
    """

    c_pos: float = 0.2
    c_neg: float = 0.2
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    residual: str = "carry"

    def __post_init__(self):
        if self.c_pos <= 0 or self.c_neg <= 0:
            raise ValueError("thresholds must be positive")
        if self.residual not in ("carry", "snap"):
            raise ValueError(f"residual mode must be 'carry' or 'snap', got {self.residual!r}")


class SweepOutput(NamedTuple):
    stream: EventStream
    ground_truth_time: float


def log_image(scene: Scene, sigma_px: float) -> np.ndarray:
    return np.log(gaussian_blur(scene.intensity, sigma_px))


_LATTICE_SLACK = 1e-9


def _exceeded(ratio: np.ndarray) -> np.ndarray:
    # slack keeps a swing that returns exactly onto a threshold multiple
    # (e.g. the end of a symmetric sweep) from firing on rounding noise
    return np.maximum(np.ceil(ratio - _LATTICE_SLACK) - 1, 0).astype(np.int64)


def threshold_events(L_old: np.ndarray, L_new: np.ndarray, gen: EventGenConfig):
    """Event counts per pixel for a change from ``L_old`` to ``L_new``.

    A pixel fires once per threshold multiple it strictly exceeds, so a change
    of exactly ``k*c`` yields ``k - 1`` events. Returns ``(n_pos, n_neg, L_ref)``
    where ``L_ref`` is the updated reference.
    """
    dL = L_new - L_old
    n_pos = _exceeded(dL / gen.c_pos)
    n_neg = _exceeded(-dL / gen.c_neg)
    if gen.residual == "carry":
        L_ref = L_old + n_pos * gen.c_pos - n_neg * gen.c_neg
    else:
        L_ref = np.where((n_pos > 0) | (n_neg > 0), L_new, L_old)
    return n_pos, n_neg, L_ref


def simulate_sweep(
    scene: Scene,
    optics: OpticsConfig | None = None,
    sweep: SweepConfig | None = None,
    gen: EventGenConfig | None = None,
    roi: Roi | None = None,
    scene_changes: Sequence[tuple[float, Scene]] = (),
) -> SweepOutput:
    """Run a focus sweep over ``scene`` and return events plus the in-focus time.

    ``scene_changes`` lists ``(t_us, scene)`` pairs: from the first step at or
    after ``t_us`` the new scene is imaged instead (content changes such as a
    display flipping digits during the sweep).
    """
    optics = optics or OpticsConfig()
    sweep = sweep or SweepConfig()
    gen = gen or EventGenConfig()
    sensor = SensorGeometry(scene.width, scene.height)
    roi = roi or Roi.full(sensor)
    roi.check(sensor)
    for _, other in scene_changes:
        if other.intensity.shape != scene.intensity.shape:
            raise ValueError("scene changes must keep the sensor size")
    changes = sorted(scene_changes, key=lambda c: c[0])

    sigmas = optics.blur_sigma_px(sweep.defocus)
    times = sweep.step_times
    ys, xs = np.mgrid[roi.y0:roi.y0 + roi.h, roi.x0:roi.x0 + roi.w]
    window = (slice(roi.y0, roi.y0 + roi.h), slice(roi.x0, roi.x0 + roi.w))

    cache: dict[tuple[int, float], np.ndarray] = {}

    def L_at(j: int) -> np.ndarray:
        which = sum(1 for t, _ in changes if times[j] >= t)
        src = scene if which == 0 else changes[which - 1][1]
        key = (which, float(sigmas[j]))
        if key not in cache:
            cache[key] = log_image(src, float(sigmas[j]))[window]
        return cache[key]

    L_ref = L_at(0).copy()
    parts = []
    for j in range(1, sweep.steps):
        n_pos, n_neg, L_ref = threshold_events(L_ref, L_at(j), gen)
        # a pixel fires one polarity per step, so row-major order is total
        signed = (n_pos - n_neg).ravel()
        idx = np.flatnonzero(signed)
        if idx.size:
            reps = np.repeat(idx, np.abs(signed[idx]))
            parts.append((
                np.full(len(reps), times[j], dtype=np.int64),
                xs.ravel()[reps],
                ys.ravel()[reps],
                np.sign(signed[reps]).astype(np.int8),
            ))

    if parts:
        cols = [np.concatenate(c) for c in zip(*parts)]
        stream = EventStream(sensor, *cols)
    else:
        stream = EventStream.empty(sensor)

    if gen.noise.active:
        from .noise import inject_noise

        t_end = int(times.max()) + 1
        stream = inject_noise(stream, gen, (sweep.t_start, t_end), roi=roi)
    return SweepOutput(stream, sweep.ground_truth_time)
