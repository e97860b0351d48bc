"""Multilevel 1-D DWT with half-point symmetric extension.

Coefficient layout and lengths follow the common toolbox convention
(``floor((n + L - 1) / 2)`` per level), so results can be compared
coefficient-for-coefficient against other implementations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .filters import WaveletFilterPair, get_filter

DEFAULT_WAVELET = "dmey"
DEFAULT_LEVELS = 6


@dataclass(frozen=True)
class DenoiseSpec:
    filter: WaveletFilterPair = field(default_factory=lambda: get_filter(DEFAULT_WAVELET))
    levels: int = DEFAULT_LEVELS
    keep: str = "approximation"

    def __post_init__(self):
        if self.levels < 1:
            raise ValueError(f"levels must be >= 1, got {self.levels}")
        if self.keep != "approximation":
            raise ValueError(f"unsupported keep mode {self.keep!r}")

    @classmethod
    def named(cls, wavelet: str = DEFAULT_WAVELET, levels: int = DEFAULT_LEVELS) -> "DenoiseSpec":
        return cls(get_filter(wavelet), levels)


@dataclass(frozen=True, eq=False)
class Pyramid:
    approx: np.ndarray
    details: list  # coarsest first: cD_L, ..., cD_1
    input_lengths: tuple  # signal length entering each level, finest first
    requested_levels: int

    @property
    def levels(self) -> int:
        return len(self.details)

    @property
    def clamped(self) -> bool:
        return self.levels < self.requested_levels


def max_level(n: int, filter_len: int) -> int:
    """Deepest useful level, floored at 1 so short inputs still get one pass."""
    if n < filter_len - 1:
        return 1
    return max(1, int(math.floor(math.log2(n / (filter_len - 1)))))


def effective_levels(n: int, spec: DenoiseSpec) -> int:
    return min(spec.levels, max_level(n, spec.filter.length))


def dwt(x: np.ndarray, filt: WaveletFilterPair) -> tuple[np.ndarray, np.ndarray]:
    L = filt.length
    xp = np.pad(np.asarray(x, dtype=np.float64), L - 1, mode="symmetric")
    a = np.convolve(xp, filt.dec_lo, mode="valid")[1::2]
    d = np.convolve(xp, filt.dec_hi, mode="valid")[1::2]
    return a, d


def _upsample_conv(c: np.ndarray, taps: np.ndarray) -> np.ndarray:
    n = len(c)
    up = np.zeros(2 * n)
    up[::2] = c
    return np.convolve(up, taps)[len(taps) - 2 : 2 * n]


def idwt(a: np.ndarray | None, d: np.ndarray | None, filt: WaveletFilterPair) -> np.ndarray:
    """Single-level inverse; either band may be ``None`` (treated as zeros)."""
    if a is None and d is None:
        raise ValueError("need at least one band")
    out = 0.0
    if a is not None:
        out = _upsample_conv(np.asarray(a, dtype=np.float64), filt.rec_lo)
    if d is not None:
        out = out + _upsample_conv(np.asarray(d, dtype=np.float64), filt.rec_hi)
    return out


def dwt_multilevel(signal, spec: DenoiseSpec) -> Pyramid:
    x = np.asarray(signal, dtype=np.float64).reshape(-1)
    if len(x) < 2:
        raise ValueError(f"signal needs at least 2 samples, got {len(x)}")
    levels = effective_levels(len(x), spec)
    details, lengths = [], []
    a = x
    for _ in range(levels):
        lengths.append(len(a))
        a, d = dwt(a, spec.filter)
        details.append(d)
    return Pyramid(a, details[::-1], tuple(lengths), spec.levels)


def waverec(pyr: Pyramid, filt: WaveletFilterPair, keep_details: bool = True) -> np.ndarray:
    a = pyr.approx
    for d, n in zip(pyr.details, reversed(pyr.input_lengths)):
        a = idwt(a, d if keep_details else None, filt)[:n]
    return a


def lowpass_reconstruct(signal, spec: DenoiseSpec) -> np.ndarray:
    """Inverse transform from the deepest approximation band alone."""
    pyr = dwt_multilevel(signal, spec)
    return waverec(pyr, spec.filter, keep_details=False)
