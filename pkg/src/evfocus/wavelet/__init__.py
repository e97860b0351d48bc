from .dwt import (
    DEFAULT_LEVELS,
    DEFAULT_WAVELET,
    DenoiseSpec,
    Pyramid,
    dwt,
    dwt_multilevel,
    effective_levels,
    idwt,
    lowpass_reconstruct,
    max_level,
    waverec,
)
from .filters import WaveletFilterPair, available, get_filter, reconstruction_error

__all__ = [
    "DEFAULT_LEVELS",
    "DEFAULT_WAVELET",
    "DenoiseSpec",
    "Pyramid",
    "WaveletFilterPair",
    "available",
    "dwt",
    "dwt_multilevel",
    "effective_levels",
    "get_filter",
    "idwt",
    "lowpass_reconstruct",
    "max_level",
    "reconstruction_error",
    "waverec",
]
