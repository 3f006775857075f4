"""Raster data model: grayscale images, binary/tri-level masks, histograms.

All intensities are stored as float64 in [0, 1], row-major.  8-bit sources
are divided by 255 on load, 16-bit by 65535, so every downstream operation
sees one representation regardless of the source bit depth.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import InvalidImageError, InvalidParameterError

# Rec.-709-style luma weights.
LUMA_WEIGHTS = (0.2126, 0.7152, 0.0722)

# Tri-level codes and their byte serialization (intensity convention:
# white brightest).
WHITE, GREY, BLACK = 0, 1, 2
LEVEL_BYTES = (255, 128, 0)

DEFAULT_BINS = 256


def _as_readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class GrayImage:
    """Immutable grayscale raster with intensities in [0, 1]."""

    pixels: np.ndarray  # float64, shape (height, width)

    def __post_init__(self):
        px = np.asarray(self.pixels, dtype=np.float64)
        if px.ndim != 2 or px.shape[0] < 1 or px.shape[1] < 1:
            raise InvalidImageError(f"expected a non-empty 2-D raster, got shape {px.shape}")
        if not np.all(np.isfinite(px)):
            raise InvalidImageError("image contains non-finite intensities")
        if px.min() < 0.0 or px.max() > 1.0:
            raise InvalidImageError("intensities must lie in [0, 1]")
        object.__setattr__(self, "pixels", _as_readonly(px))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def to_bytes(self) -> bytes:
        """Row-major 8-bit gray serialization (round-half-even to 0..255)."""
        return np.rint(self.pixels * 255.0).astype(np.uint8).tobytes()


@dataclass(frozen=True)
class BinaryImage:
    """Immutable {0,1} mask, plus a flag for degenerate thresholdings."""

    pixels: np.ndarray  # uint8, values 0/1
    degenerate: bool = False

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2 or px.size == 0:
            raise InvalidImageError(f"expected a non-empty 2-D mask, got shape {px.shape}")
        if px.dtype == np.bool_:
            px = px.astype(np.uint8)
        if not np.isin(px, (0, 1)).all():
            raise InvalidImageError("binary image values must be 0 or 1")
        object.__setattr__(self, "pixels", _as_readonly(px.astype(np.uint8)))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def as_bool(self) -> np.ndarray:
        return self.pixels.astype(bool)


@dataclass(frozen=True)
class TriLevelImage:
    """Immutable three-level raster (WHITE / GREY / BLACK)."""

    pixels: np.ndarray  # uint8, values in {WHITE, GREY, BLACK}

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2 or px.size == 0:
            raise InvalidImageError(f"expected a non-empty 2-D raster, got shape {px.shape}")
        if not np.isin(px, (WHITE, GREY, BLACK)).all():
            raise InvalidImageError("tri-level values must be WHITE, GREY or BLACK")
        object.__setattr__(self, "pixels", _as_readonly(px.astype(np.uint8)))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def to_bytes(self) -> bytes:
        """Row-major serialization with levels mapped to bytes 255/128/0."""
        lut = np.array(LEVEL_BYTES, dtype=np.uint8)
        return lut[self.pixels].tobytes()

    def level_counts(self) -> tuple[int, int, int]:
        counts = np.bincount(self.pixels.ravel(), minlength=3)
        return int(counts[WHITE]), int(counts[GREY]), int(counts[BLACK])


@dataclass(frozen=True)
class Histogram:
    """Luminance histogram over uniform bins covering [0, 1]."""

    counts: np.ndarray  # int64 per bin
    bin_count: int = field(default=DEFAULT_BINS)

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.ndim != 1 or counts.shape[0] != self.bin_count:
            raise InvalidParameterError("counts length must equal bin_count")
        if (counts < 0).any():
            raise InvalidParameterError("histogram counts must be non-negative")
        object.__setattr__(self, "counts", _as_readonly(counts))

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def probabilities(self) -> np.ndarray:
        total = self.total
        if total == 0:
            raise InvalidImageError("histogram is empty")
        return self.counts / total


def to_grayscale(raster: np.ndarray) -> GrayImage:
    """Convert an RGB raster (or pass through a gray one) to a GrayImage.

    Luminance is the Rec.-709 weighted channel sum, clamped to [0, 1].
    """
    arr = np.asarray(raster, dtype=np.float64)
    if arr.size == 0:
        raise InvalidImageError("zero-dimension raster")
    if arr.ndim == 2:
        return GrayImage(arr)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise InvalidImageError(f"expected (h, w) or (h, w, 3) raster, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidImageError("raster contains non-finite values")
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise InvalidImageError("channel values must lie in [0, 1]")
    w = np.array(LUMA_WEIGHTS)
    luma = arr @ w
    return GrayImage(np.clip(luma, 0.0, 1.0))


def histogram(img: GrayImage, bins: int = DEFAULT_BINS) -> Histogram:
    """Histogram of intensities over `bins` uniform bins.

    Bins are left-closed; the value 1.0 falls in the last bin
    (index = min(floor(v * bins), bins - 1)).
    """
    if bins < 2:
        raise InvalidParameterError(f"bins must be >= 2, got {bins}")
    idx = np.minimum((img.pixels * bins).astype(np.int64), bins - 1)
    counts = np.bincount(idx.ravel(), minlength=bins)
    return Histogram(counts, bin_count=bins)


def load_image(path: str | Path) -> GrayImage:
    """Load a PNG/JPEG file as a GrayImage.

    Alpha, when present, is composited over white before conversion.
    """
    path = Path(path)
    with Image.open(path) as im:
        im.load()
        if im.mode == "P":
            im = im.convert("RGBA")
        if im.mode in ("RGBA", "LA"):
            background = Image.new("RGBA", im.size, (255, 255, 255, 255))
            im = Image.alpha_composite(background, im.convert("RGBA")).convert("RGB")
        if im.mode in ("I", "I;16", "I;16B", "I;16L"):
            arr = np.asarray(im, dtype=np.float64) / 65535.0
            return GrayImage(np.clip(arr, 0.0, 1.0))
        if im.mode == "L":
            return GrayImage(np.asarray(im, dtype=np.float64) / 255.0)
        im = im.convert("RGB")
        arr = np.asarray(im, dtype=np.float64) / 255.0
    return to_grayscale(arr)


def save_gray_png(img: GrayImage | BinaryImage, path: str | Path) -> None:
    """Write an image as an 8-bit grayscale PNG (masks become 0/255)."""
    if isinstance(img, BinaryImage):
        arr = (img.pixels * 255).astype(np.uint8)
    else:
        arr = np.rint(img.pixels * 255.0).astype(np.uint8)
    Image.fromarray(arr, mode="L").save(Path(path), format="PNG")
