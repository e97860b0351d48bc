"""Two-channel filter banks loaded from the bundled ``filters.txt``."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np

PR_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class WaveletFilterPair:
    name: str
    dec_lo: np.ndarray
    dec_hi: np.ndarray
    rec_lo: np.ndarray
    rec_hi: np.ndarray

    def __post_init__(self):
        taps = []
        for attr in ("dec_lo", "dec_hi", "rec_lo", "rec_hi"):
            arr = np.array(getattr(self, attr), dtype=np.float64).reshape(-1)
            arr.setflags(write=False)
            object.__setattr__(self, attr, arr)
            taps.append(len(arr))
        if len(set(taps)) != 1 or taps[0] < 2 or taps[0] % 2:
            raise ValueError(f"{self.name}: filters must share one even length, got {taps}")
        err = reconstruction_error(self)
        if err > PR_TOLERANCE:
            raise ValueError(f"{self.name}: impulse reconstruction error {err:.2e} > {PR_TOLERANCE}")

    @property
    def length(self) -> int:
        return len(self.dec_lo)


def reconstruction_error(filt: WaveletFilterPair) -> float:
    """Worst single-level round-trip error over unit impulses at every phase."""
    from .dwt import dwt, idwt

    n = 2 * filt.length
    worst = 0.0
    for pos in range(n):
        x = np.zeros(n)
        x[pos] = 1.0
        a, d = dwt(x, filt)
        y = idwt(a, d, filt)[:n]
        worst = max(worst, float(np.abs(y - x).max()))
    return worst


def _parse(text: str) -> dict[str, WaveletFilterPair]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    banks = {}
    i = 0
    while i < len(lines):
        head = lines[i].split()
        if len(head) != 3 or head[0] != "filter":
            raise ValueError(f"bad filter header: {lines[i]!r}")
        name, ntaps = head[1], int(head[2])
        arrays = [np.array(lines[i + j].split(), dtype=np.float64) for j in range(1, 5)]
        for arr in arrays:
            if len(arr) != ntaps:
                raise ValueError(f"{name}: expected {ntaps} taps, got {len(arr)}")
        banks[name] = WaveletFilterPair(name, *arrays)
        i += 5
    return banks


@lru_cache(maxsize=None)
def _bundled() -> dict[str, WaveletFilterPair]:
    text = resources.files("evfocus.wavelet").joinpath("filters.txt").read_text()
    return _parse(text)


def available() -> list[str]:
    return sorted(_bundled())


def get_filter(name: str) -> WaveletFilterPair:
    try:
        return _bundled()[name]
    except KeyError:
        raise ValueError(f"unknown wavelet {name!r}; available: {', '.join(available())}") from None
