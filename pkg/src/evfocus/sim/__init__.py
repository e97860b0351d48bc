"""Focus-sweep simulator producing event streams with known focus time."""

from .generator import (
    EventGenConfig,
    NoiseConfig,
    SweepConfig,
    SweepOutput,
    log_image,
    simulate_sweep,
    threshold_events,
)
from .noise import inject_noise
from .optics import OpticsConfig, blur_radius, gaussian_blur, gaussian_kernel
from .scenes import PATTERNS, Scene, digits, load_pgm_scene, make_pattern, read_pgm, write_pgm

__all__ = [
    "EventGenConfig",
    "NoiseConfig",
    "OpticsConfig",
    "PATTERNS",
    "Scene",
    "SweepConfig",
    "SweepOutput",
    "blur_radius",
    "digits",
    "gaussian_blur",
    "gaussian_kernel",
    "inject_noise",
    "load_pgm_scene",
    "log_image",
    "make_pattern",
    "read_pgm",
    "simulate_sweep",
    "threshold_events",
    "write_pgm",
]
