"""Polarity-based focus: locate the centre of symmetry of the PER/NER curves.

The negative-rate curve is compared against the time-reversed positive-rate
curve at every candidate shift ``a``; the shift with the smallest mean
squared difference over the overlap marks twice the symmetry centre.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numba
import numpy as np

from .epr import DegenerateChannelError, EprSequence, NormalizationMode, normalize
from .wavelet import DenoiseSpec, effective_levels, lowpass_reconstruct

DEFAULT_K = 0.5


@dataclass(frozen=True, eq=False)
class MseCurve:
    a_min_index: int
    a_max_index: int
    values: np.ndarray
    k: float

    @property
    def shifts(self) -> np.ndarray:
        return np.arange(self.a_min_index, self.a_max_index + 1)

    @property
    def flat(self) -> bool:
        spread = float(np.ptp(self.values))
        return spread <= 1e-12 * float(np.abs(self.values).max())


@dataclass(frozen=True, eq=False)
class FocusResult:
    """Focus estimate on the time axis of the input sequence.

    ``focus_bin`` is a fractional bin index (half-bin resolution for the
    symmetry methods); ``focus_time`` is the matching bin-centre timestamp in
    microseconds.
    """

    method: str
    focus_bin: float
    focus_time: float
    a_star: int | None = None
    position_um: float | None = None
    diagnostics: dict = field(default_factory=dict)

    def located(self, position_um: float) -> "FocusResult":
        return replace(self, position_um=float(position_um))

    @property
    def warnings(self) -> list[str]:
        return list(self.diagnostics.get("warnings", []))


def scan_range(n: int, k: float) -> tuple[int, int]:
    # round before ceil/floor so k*n = 121.99999999 style noise does not shift the range
    lo = math.ceil(round(k * n, 9))
    hi = math.floor(round((2.0 - k) * n, 9))
    return max(lo, 1), min(hi, 2 * n - 1)


@numba.njit(cache=True)
def _mse_scan(per, ner, a_lo, a_hi):
    n = per.shape[0]
    out = np.empty(a_hi - a_lo + 1)
    for idx in range(a_hi - a_lo + 1):
        a = a_lo + idx
        j0 = max(0, a - n)
        j1 = min(a, n)
        s = 0.0
        for j in range(j0, j1):
            d = ner[j] - per[a - 1 - j]
            s += d * d
        out[idx] = s / (j1 - j0)
    return out


def mse_curve(per, ner, k: float = DEFAULT_K) -> MseCurve:
    """Mean squared mismatch between ``ner[j]`` and ``per[a-1-j]`` over the overlap.

    For each integer shift ``a`` in ``[ceil(k*n), floor((2-k)*n)]`` the sum runs
    over every ``j`` with both indices inside the sequence, left to right, and
    is divided by the overlap length ``min(a, 2n - a)``.
    """
    per = np.ascontiguousarray(per, dtype=np.float64)
    ner = np.ascontiguousarray(ner, dtype=np.float64)
    n = len(per)
    if len(ner) != n:
        raise ValueError(f"per/ner lengths differ ({n} vs {len(ner)})")
    if n < 2:
        raise ValueError(f"need at least 2 bins, got {n}")
    if not 0.0 < k < 1.0:
        raise ValueError(f"investigation factor k must lie in (0, 1), got {k}")
    a_lo, a_hi = scan_range(n, k)
    return MseCurve(a_lo, a_hi, _mse_scan(per, ner, a_lo, a_hi), float(k))


def _check_channels(seq: EprSequence) -> None:
    for name, arr in (("positive", seq.per), ("negative", seq.ner)):
        if not arr.sum() > 0:
            raise DegenerateChannelError(
                f"degenerate polarity channel: no {name} events in "
                f"[{seq.t0}, {seq.t_end}) us; focusing cannot proceed"
            )


def _denoise(seq: EprSequence, spec: DenoiseSpec) -> EprSequence:
    # wavelet ringing can dip below zero; rates are clipped back to >= 0
    per = np.clip(lowpass_reconstruct(seq.per, spec), 0.0, None)
    ner = np.clip(lowpass_reconstruct(seq.ner, spec), 0.0, None)
    return replace(seq, per=per, ner=ner)


def _bin_time(seq: EprSequence, focus_bin: float) -> float:
    return seq.t0 + (focus_bin + 0.5) * seq.dt


def pbf_focus(
    seq: EprSequence,
    spec: DenoiseSpec | None = None,
    norm: NormalizationMode | str = NormalizationMode.UNIT_SUM,
    k: float = DEFAULT_K,
    *,
    denoise: bool = True,
    normalize_first: bool = False,
    method: str = "pbf",
) -> FocusResult:
    """Denoise, normalize, scan the symmetry MSE and return its argmin.

    ``normalize_first`` swaps the first two stages; ``denoise=False`` skips
    the wavelet stage entirely (see :func:`ablate_no_filter`).
    """
    _check_channels(seq)
    if seq.n < 2:
        raise ValueError(f"need at least 2 bins, got {seq.n}")
    spec = spec or DenoiseSpec()
    warnings = []
    clamped = False
    if denoise:
        clamped = effective_levels(seq.n, spec) < spec.levels
        if clamped:
            warnings.append(
                f"wavelet levels clamped to {effective_levels(seq.n, spec)} "
                f"(requested {spec.levels}) for {seq.n} bins"
            )

    work = seq
    if normalize_first:
        work = normalize(work, norm)
        if denoise:
            work = _denoise(work, spec)
    else:
        if denoise:
            work = _denoise(work, spec)
        try:
            work = normalize(work, norm)
        except DegenerateChannelError as exc:
            raise DegenerateChannelError(f"{exc} after wavelet filtering") from exc

    curve = mse_curve(work.per, work.ner, k)
    i = int(np.argmin(curve.values))
    a_star = curve.a_min_index + i
    if curve.flat:
        warnings.append("flat MSE curve: focus is undefined, reporting smallest-shift argmin")
    # zero-based pairing ner[j] <-> per[a-1-j] is symmetric about (a-1)/2
    focus_bin = (a_star - 1) / 2.0
    return FocusResult(
        method=method,
        focus_bin=focus_bin,
        focus_time=_bin_time(seq, focus_bin),
        a_star=a_star,
        diagnostics={
            "clamped_levels": clamped,
            "wavelet_levels": effective_levels(seq.n, spec) if denoise else 0,
            "degenerate_channel": False,
            "flat_curve": curve.flat,
            "mse_min": float(curve.values[i]),
            "curve": curve,
            "n_bins": seq.n,
            "warnings": warnings,
        },
    )


def ablate_no_filter(
    seq: EprSequence,
    norm: NormalizationMode | str = NormalizationMode.UNIT_SUM,
    k: float = DEFAULT_K,
) -> FocusResult:
    return pbf_focus(seq, None, norm, k, denoise=False, method="pbf-nofilter")


def ablate_no_mse(seq: EprSequence, spec: DenoiseSpec | None = None) -> FocusResult:
    """Keep the wavelet stage but take the event-rate maximum as focus."""
    _check_channels(seq)
    spec = spec or DenoiseSpec()
    den = _denoise(seq, spec)
    er = den.per + den.ner
    i = int(np.argmax(er))
    flat = float(np.ptp(er)) <= 1e-12 * float(er.max())
    warnings = ["flat event rate: reporting smallest-index maximum"] if flat else []
    clamped = effective_levels(seq.n, spec) < spec.levels
    return FocusResult(
        method="pbf-nomse",
        focus_bin=float(i),
        focus_time=_bin_time(seq, i),
        diagnostics={
            "clamped_levels": clamped,
            "wavelet_levels": effective_levels(seq.n, spec),
            "degenerate_channel": False,
            "flat_curve": flat,
            "er_max": float(er[i]),
            "n_bins": seq.n,
            "warnings": warnings,
        },
    )
