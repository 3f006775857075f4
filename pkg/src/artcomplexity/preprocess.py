"""Image transformations feeding the measures.

Four operations: hysteresis binarization over an Otsu threshold, local
adaptive binarization, Sobel gradient magnitude, and coarse-graining to a
tri-level raster.  Window-based operations use clamped (shrinking) windows
at image borders; there is no reflection or zero padding anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import InvalidImageError, InvalidParameterError
from .image import BLACK, GREY, WHITE, BinaryImage, GrayImage, Histogram, TriLevelImage, histogram

EIGHT_CONNECTED = np.ones((3, 3), dtype=bool)


@dataclass(frozen=True)
class AdaptiveBinarizationParams:
    """Window radius for local mean thresholding."""

    r: int = 2

    def __post_init__(self):
        if self.r < 1:
            raise InvalidParameterError(f"adaptive binarization radius must be >= 1, got {self.r}")


@dataclass(frozen=True)
class StructuralParams:
    """Coarse-grain radius and the tri-level split threshold."""

    r_cg: int = 5
    delta: float = 0.23

    def __post_init__(self):
        if self.r_cg < 1:
            raise InvalidParameterError(f"coarse-grain radius must be >= 1, got {self.r_cg}")
        if not 0.0 <= self.delta <= 0.5:
            raise InvalidParameterError(f"delta must lie in [0, 0.5], got {self.delta}")


def _window_sums(values: np.ndarray, r: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-pixel sum and pixel count over the clamped (2r+1)^2 window.

    Computed with an integral image so the cost is independent of r.
    """
    h, w = values.shape
    integral = np.zeros((h + 1, w + 1), dtype=np.float64)
    np.cumsum(np.cumsum(values, axis=0), axis=1, out=integral[1:, 1:])

    rows = np.arange(h)
    cols = np.arange(w)
    top = np.maximum(rows - r, 0)
    bottom = np.minimum(rows + r, h - 1) + 1
    left = np.maximum(cols - r, 0)
    right = np.minimum(cols + r, w - 1) + 1

    sums = (
        integral[bottom[:, None], right[None, :]]
        - integral[top[:, None], right[None, :]]
        - integral[bottom[:, None], left[None, :]]
        + integral[top[:, None], left[None, :]]
    )
    counts = (bottom - top)[:, None] * (right - left)[None, :]
    return sums, counts.astype(np.float64)


def local_mean(img: GrayImage, r: int) -> np.ndarray:
    """Mean intensity over the clamped (2r+1)^2 window centered per pixel."""
    sums, counts = _window_sums(img.pixels, r)
    return sums / counts


def local_std(img: GrayImage, r: int) -> np.ndarray:
    """Standard deviation over the same clamped windows as local_mean.

    Computed but not consumed by any measure; exposed for diagnostics.
    """
    sums, counts = _window_sums(img.pixels, r)
    sq_sums, _ = _window_sums(img.pixels**2, r)
    var = np.maximum(sq_sums / counts - (sums / counts) ** 2, 0.0)
    return np.sqrt(var)


def otsu_threshold(hist: Histogram) -> float | None:
    """Otsu threshold as an intensity value, or None when degenerate.

    Returns the left edge of the first foreground bin.  Ties in the
    between-class variance are broken toward the highest split so that the
    weak hysteresis threshold stays clear of the background mode.
    """
    counts = hist.counts.astype(np.float64)
    bins = hist.bin_count
    total = counts.sum()
    if total == 0 or np.count_nonzero(counts) < 2:
        return None
    centers = (np.arange(bins) + 0.5) / bins
    weight_bg = np.cumsum(counts)
    weight_fg = total - weight_bg
    mass = np.cumsum(counts * centers)
    mean_bg = np.divide(mass, weight_bg, out=np.zeros(bins), where=weight_bg > 0)
    mean_fg = np.divide(mass[-1] - mass, weight_fg, out=np.zeros(bins), where=weight_fg > 0)
    valid = (weight_bg > 0) & (weight_fg > 0)
    between = np.where(valid, weight_bg * weight_fg * (mean_bg - mean_fg) ** 2, -np.inf)
    best = np.flatnonzero(between == between.max())[-1]
    return (best + 1) / bins


def morphological_binarize(img: GrayImage) -> BinaryImage:
    """Two-threshold hysteresis binarization.

    The strong threshold comes from Otsu's criterion on the 256-bin
    luminance histogram; the weak threshold is half of it.  A pixel is
    foreground iff it reaches the strong threshold, or reaches the weak one
    and is 8-connected to a strong pixel.  Constant images yield an
    all-background result flagged degenerate.
    """
    t_hi = otsu_threshold(histogram(img))
    if t_hi is None:
        return BinaryImage(np.zeros_like(img.pixels, dtype=np.uint8), degenerate=True)
    t_lo = 0.5 * t_hi
    strong = img.pixels >= t_hi
    weak = img.pixels >= t_lo
    labels, n = ndimage.label(weak, structure=EIGHT_CONNECTED)
    if n == 0:
        return BinaryImage(np.zeros_like(img.pixels, dtype=np.uint8), degenerate=True)
    keep = np.zeros(n + 1, dtype=bool)
    keep[np.unique(labels[strong])] = True
    keep[0] = False
    return BinaryImage(keep[labels].astype(np.uint8))


def adaptive_binarize(img: GrayImage, params: AdaptiveBinarizationParams) -> BinaryImage:
    """Pixel -> 1 iff strictly above the mean of its clamped local window."""
    mean = local_mean(img, params.r)
    return BinaryImage((img.pixels > mean).astype(np.uint8))


def sobel_edges(img: GrayImage) -> GrayImage:
    """Gradient magnitude from the 3x3 Sobel kernels, borders replicated.

    The output is rescaled so its maximum is 1; an all-zero gradient field
    stays all-zero.
    """
    if img.width < 3 or img.height < 3:
        raise InvalidImageError("sobel_edges needs width and height >= 3")
    p = np.pad(img.pixels, 1, mode="edge")
    # Gx responds to horizontal gradients, Gy to vertical ones.
    gx = (
        (p[:-2, 2:] + 2.0 * p[1:-1, 2:] + p[2:, 2:])
        - (p[:-2, :-2] + 2.0 * p[1:-1, :-2] + p[2:, :-2])
    )
    gy = (
        (p[2:, :-2] + 2.0 * p[2:, 1:-1] + p[2:, 2:])
        - (p[:-2, :-2] + 2.0 * p[:-2, 1:-1] + p[:-2, 2:])
    )
    mag = np.hypot(gx, gy)
    peak = mag.max()
    if peak > 0:
        mag /= peak
    return GrayImage(np.clip(mag, 0.0, 1.0))


def coarse_grain(img: GrayImage, params: StructuralParams) -> TriLevelImage:
    """Coarse-grain to three levels by local darkness fraction.

    eta(pixel) = mean of (1 - intensity) over the clamped (2*r_cg+1)^2
    window; the level is white for eta <= delta, grey for
    delta < eta <= 1 - delta, black for eta > 1 - delta.
    """
    sums, counts = _window_sums(1.0 - img.pixels, params.r_cg)
    eta = sums / counts
    levels = np.full(eta.shape, GREY, dtype=np.uint8)
    levels[eta <= params.delta] = WHITE
    levels[eta > 1.0 - params.delta] = BLACK
    return TriLevelImage(levels)
