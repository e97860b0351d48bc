"""Source images for the simulator: generated patterns and PGM files."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

PATTERNS = ("step", "bars", "checker", "digits", "uniform")


@dataclass(frozen=True, eq=False)
class Scene:
    """Linear light intensity on the sensor, shape (height, width)."""

    intensity: np.ndarray

    def __post_init__(self):
        img = np.array(self.intensity, dtype=np.float64)
        if img.ndim != 2:
            raise ValueError(f"scene must be 2-D, got shape {img.shape}")
        if img.shape[0] < 8 or img.shape[1] < 8:
            raise ValueError(f"scene must be at least 8x8, got {img.shape[1]}x{img.shape[0]}")
        if not (img > 0).all():
            raise ValueError("log undefined: scene intensity must be strictly positive")
        img.setflags(write=False)
        object.__setattr__(self, "intensity", img)

    @property
    def width(self) -> int:
        return self.intensity.shape[1]

    @property
    def height(self) -> int:
        return self.intensity.shape[0]


def step_edge(width=64, height=48, lo=0.05, hi=1.0, edge=None, vertical=True) -> Scene:
    img = np.full((height, width), lo)
    if vertical:
        img[:, (width // 2 if edge is None else edge):] = hi
    else:
        img[(height // 2 if edge is None else edge):, :] = hi
    return Scene(img)


def bars(width=64, height=48, lo=0.05, hi=1.0, period=16) -> Scene:
    x = np.arange(width)
    row = np.where((x // (period // 2)) % 2 == 0, lo, hi)
    return Scene(np.tile(row, (height, 1)))


def checker(width=64, height=48, lo=0.05, hi=1.0, cell=4, seed=0) -> Scene:
    """Glyph-like blocks: a checkerboard with a fixed random subset of cells inverted."""
    rng = np.random.default_rng(seed)
    ny, nx = -(-height // cell), -(-width // cell)
    cells = (np.add.outer(np.arange(ny), np.arange(nx)) % 2).astype(bool)
    cells ^= rng.random((ny, nx)) < 0.35
    img = np.where(np.kron(cells, np.ones((cell, cell), dtype=bool))[:height, :width], hi, lo)
    return Scene(img)


_SEGMENTS = {
    "0": "abcdef", "1": "bc", "2": "abdeg", "3": "abcdg", "4": "bcfg",
    "5": "acdfg", "6": "acdefg", "7": "abc", "8": "abcdefg", "9": "abcdfg", " ": "",
}


def digits(text: str, width=64, height=48, lo=0.05, hi=1.0, stroke=3) -> Scene:
    """Seven-segment rendering of ``text``, bright segments on a dark field."""
    img = np.full((height, width), lo)
    n = max(len(text), 1)
    cell_w = width // n
    gw, gh = int(cell_w * 0.7), int(height * 0.8)
    y0 = (height - gh) // 2
    for i, ch in enumerate(text):
        if ch not in _SEGMENTS:
            raise ValueError(f"no glyph for {ch!r}")
        x0 = i * cell_w + (cell_w - gw) // 2
        mid = y0 + gh // 2
        boxes = {
            "a": (y0, y0 + stroke, x0, x0 + gw),
            "d": (y0 + gh - stroke, y0 + gh, x0, x0 + gw),
            "g": (mid - stroke // 2, mid - stroke // 2 + stroke, x0, x0 + gw),
            "f": (y0, mid, x0, x0 + stroke),
            "e": (mid, y0 + gh, x0, x0 + stroke),
            "b": (y0, mid, x0 + gw - stroke, x0 + gw),
            "c": (mid, y0 + gh, x0 + gw - stroke, x0 + gw),
        }
        for seg in _SEGMENTS[ch]:
            r0, r1, c0, c1 = boxes[seg]
            img[r0:r1, c0:c1] = hi
    return Scene(img)


def uniform(width=64, height=48, level=0.5) -> Scene:
    return Scene(np.full((height, width), float(level)))


def make_pattern(name: str, width=64, height=48, lo=0.05, hi=1.0, seed=0) -> Scene:
    if name == "step":
        return step_edge(width, height, lo, hi)
    if name == "bars":
        return bars(width, height, lo, hi)
    if name == "checker":
        return checker(width, height, lo, hi, seed=seed)
    if name == "digits":
        return digits("41", width, height, lo, hi)
    if name == "uniform":
        return uniform(width, height, hi)
    raise ValueError(f"unknown pattern {name!r}; choose from {', '.join(PATTERNS)}")


def _pgm_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    tokens, pos = [], 0
    while len(tokens) < count:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        tokens.append(data[start:pos])
    return tokens, pos + 1  # single whitespace byte before the raster


def read_pgm(path) -> tuple[np.ndarray, int]:
    """Read a binary (P5) graymap, 8- or 16-bit; returns (levels, maxval)."""
    data = Path(path).read_bytes()
    (magic, w, h, maxval), offset = _pgm_tokens(data, 4)
    if magic != b"P5":
        raise ValueError(f"{path}: not a binary PGM (magic {magic!r})")
    w, h, maxval = int(w), int(h), int(maxval)
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    need = w * h * dtype.itemsize
    raster = data[offset:offset + need]
    if len(raster) != need:
        raise ValueError(f"{path}: truncated raster, expected {need} bytes, got {len(raster)}")
    return np.frombuffer(raster, dtype=dtype).reshape(h, w).astype(np.int64), maxval


def write_pgm(path, pixels: np.ndarray, maxval: int = 255) -> None:
    pixels = np.asarray(pixels)
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    header = f"P5\n{pixels.shape[1]} {pixels.shape[0]}\n{maxval}\n".encode()
    Path(path).write_bytes(header + pixels.astype(dtype).tobytes())


def load_pgm_scene(path) -> Scene:
    """Graymap levels map to intensity (level + 1) / (maxval + 1), keeping black positive."""
    pixels, maxval = read_pgm(path)
    return Scene((pixels + 1.0) / (maxval + 1.0))
