"""Method dispatch shared by the CLI, the benchmark and the test suites."""

from __future__ import annotations

from dataclasses import dataclass

from .egs import DEFAULT_TOL_BINS, DEFAULT_WINDOW_S, egs_focus, er_sequence
from .epr import EprSequence, NormalizationMode
from .pbf import DEFAULT_K, FocusResult, ablate_no_filter, ablate_no_mse, pbf_focus
from .wavelet import DEFAULT_LEVELS, DEFAULT_WAVELET, DenoiseSpec

METHODS = ("pbf", "egs", "pbf-nofilter", "pbf-nomse")


@dataclass(frozen=True)
class FocusOptions:
    k: float = DEFAULT_K
    norm: str = NormalizationMode.UNIT_SUM.value
    wavelet: str = DEFAULT_WAVELET
    levels: int = DEFAULT_LEVELS
    window_s: float = DEFAULT_WINDOW_S
    tol_bins: int = DEFAULT_TOL_BINS

    def denoise_spec(self) -> DenoiseSpec:
        return DenoiseSpec.named(self.wavelet, self.levels)


def run_focus(seq: EprSequence, method: str = "pbf", opts: FocusOptions | None = None) -> FocusResult:
    opts = opts or FocusOptions()
    if method == "pbf":
        return pbf_focus(seq, opts.denoise_spec(), opts.norm, opts.k)
    if method == "pbf-nofilter":
        return ablate_no_filter(seq, opts.norm, opts.k)
    if method == "pbf-nomse":
        return ablate_no_mse(seq, opts.denoise_spec())
    if method == "egs":
        return egs_focus(er_sequence(seq), opts.window_s, opts.tol_bins)
    raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")


_warm = False


def warm_up() -> None:
    """Run every method once on a tiny sequence so timings exclude JIT/cache loading."""
    global _warm
    if _warm:
        return
    import numpy as np

    i = np.arange(64, dtype=np.float64)
    bump = np.exp(-0.5 * ((i - 36) / 6) ** 2) + 0.1
    seq = EprSequence(0, 1000, bump, bump[::-1].copy())
    for method in METHODS:
        run_focus(seq, method, FocusOptions(window_s=0.005))
    _warm = True
