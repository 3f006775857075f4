"""The per-image complexity measures.

Eleven measures over a GrayImage: luminance entropy and energy, contour
and Euler counts from a hysteresis binarization, three compression-based
complexities, box-counting fractal dimension with its Gaussian aesthetic
transform, and intensity skewness.  `measure_all` evaluates the full
vector sharing intermediates, with per-measure failures recorded as
missing values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np
from scipy import ndimage

from . import codec
from .errors import InvalidImageError, InvalidParameterError, UndefinedMeasureError
from .image import BinaryImage, GrayImage, histogram
from .preprocess import (
    EIGHT_CONNECTED,
    AdaptiveBinarizationParams,
    StructuralParams,
    adaptive_binarize,
    coarse_grain,
    morphological_binarize,
    sobel_edges,
)

FOUR_CONNECTED = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


@dataclass(frozen=True)
class FractalAestheticParams:
    """Peak preferred fractal dimension and the preference-curve width."""

    p: float = 1.35
    sigma: float = 0.2

    def __post_init__(self):
        if self.sigma <= 0:
            raise InvalidParameterError(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True)
class MeasureVector:
    """One image's full set of measurements; None marks a missing value."""

    S: float | None = None
    E: float | None = None
    T: int | None = None
    gamma: int | None = None
    C_a: float | None = None
    C_s: float | None = None
    C_mc: float | None = None
    C_mc_E: float | None = None
    D: float | None = None
    D_a: float | None = None
    skew: float | None = None

    def as_dict(self) -> dict[str, float | int | None]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


MEASURE_NAMES = tuple(f.name for f in fields(MeasureVector))


def entropy(img: GrayImage, bins: int = 256) -> float:
    """Shannon entropy (nats) of the luminance histogram."""
    p = histogram(img, bins).probabilities()
    p = p[p > 0]
    return float(-np.sum(p * np.log(p))) + 0.0


def energy(img: GrayImage, bins: int = 256) -> float:
    """Sum of squared bin probabilities of the luminance histogram."""
    p = histogram(img, bins).probabilities()
    return float(np.sum(p * p))


def binary_topology(mask: BinaryImage) -> tuple[int, int]:
    """(components, holes): 8-connected foreground regions and 4-connected
    background regions not touching the image border."""
    fg = mask.as_bool()
    _, n_components = ndimage.label(fg, structure=EIGHT_CONNECTED)
    bg_labels, n_bg = ndimage.label(~fg, structure=FOUR_CONNECTED)
    if n_bg == 0:
        return n_components, 0
    border = np.unique(
        np.concatenate(
            [bg_labels[0, :], bg_labels[-1, :], bg_labels[:, 0], bg_labels[:, -1]]
        )
    )
    n_border = np.count_nonzero(border)
    return n_components, n_bg - n_border


def contours(img: GrayImage) -> int:
    """Closed boundary curves: one per component plus one per hole."""
    mask = morphological_binarize(img)
    if mask.degenerate:
        return 0
    n_components, holes = binary_topology(mask)
    return n_components + holes


def euler(img: GrayImage) -> int:
    """Connected foreground regions minus holes."""
    mask = morphological_binarize(img)
    if mask.degenerate:
        return 0
    n_components, holes = binary_topology(mask)
    return n_components - holes


def algorithmic_complexity(img: GrayImage) -> float:
    """LZW compression ratio of the row-major 8-bit gray bytes."""
    raw = img.to_bytes()
    return len(codec.lzw_compress(raw)) / (img.width * img.height)


def structural_complexity(img: GrayImage, params: StructuralParams | None = None) -> float:
    """Compression ratio after coarse-graining to three levels."""
    params = params or StructuralParams()
    tri = coarse_grain(img, params)
    return len(codec.lzw_compress(tri.to_bytes())) / (img.width * img.height)


def mc_complexity(
    img: GrayImage,
    params: codec.LossyCodecParams | None = None,
    encoder=None,
) -> float:
    """Lossy reconstruction RMS error times the lossy compression ratio.

    `encoder` may swap in any (img, params) -> (size, reconstruction)
    callable, e.g. a standard-format JPEG encoder for sensitivity checks;
    the in-repo block-DCT codec is the default.
    """
    params = params or codec.LossyCodecParams()
    encode = encoder or codec.lossy_encode
    size, recon = encode(img, params)
    rms = math.sqrt(float(np.mean((img.pixels - recon.pixels) ** 2)))
    return rms * size / (img.width * img.height)


def mc_complexity_edges(
    img: GrayImage,
    params: codec.LossyCodecParams | None = None,
    encoder=None,
) -> float:
    """mc_complexity applied to the Sobel gradient-magnitude image."""
    return mc_complexity(sobel_edges(img), params, encoder)


def box_counting_sizes(width: int, height: int) -> np.ndarray:
    """Power-of-two box sizes from 2 up to half the short image side."""
    if min(width, height) < 16:
        raise InvalidImageError("box counting needs min(width, height) >= 16")
    limit = min(width, height) // 2
    sizes = []
    s = 2
    while s <= limit:
        sizes.append(s)
        s *= 2
    if len(sizes) < 4:
        raise InvalidImageError(
            f"box counting needs >= 4 usable box sizes, image yields {len(sizes)}"
        )
    return np.array(sizes, dtype=np.int64)


def _occupied_cells(mask: np.ndarray, s: int, oy: int, ox: int) -> int:
    """Cells of an s-grid shifted by (oy, ox) holding >= 1 foreground pixel."""
    h, w = mask.shape
    padded = np.pad(mask, ((oy, (-(h + oy)) % s), (ox, (-(w + ox)) % s)))
    cells = padded.reshape(padded.shape[0] // s, s, padded.shape[1] // s, s)
    return int(cells.any(axis=(1, 3)).sum())


def box_counts(mask: np.ndarray, sizes: np.ndarray, grid_offsets: int = 1) -> np.ndarray:
    """Occupied-cell counts N(s), partial cells included.

    With grid_offsets == 1 the grid is anchored at the origin (the
    deterministic default).  Larger values average N(s) over that many
    evenly spaced diagonal grid shifts.
    """
    if grid_offsets < 1:
        raise InvalidParameterError(f"grid_offsets must be >= 1, got {grid_offsets}")
    mask = np.asarray(mask, dtype=bool)
    counts = np.empty(len(sizes), dtype=np.float64)
    for i, s in enumerate(sizes):
        k = min(grid_offsets, int(s))
        shifts = [int(j * s / k) for j in range(k)]
        counts[i] = float(np.mean([_occupied_cells(mask, int(s), o, o) for o in shifts]))
    return counts


def dimension_from_mask(mask: np.ndarray, grid_offsets: int = 1) -> float:
    """Box-counting dimension of a boolean foreground mask.

    Empty foreground is degenerate and yields 0.
    """
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        return 0.0
    sizes = box_counting_sizes(mask.shape[1], mask.shape[0])
    counts = box_counts(mask, sizes, grid_offsets)
    slope = np.polyfit(np.log(1.0 / sizes), np.log(counts), 1)[0]
    return float(slope)


def fractal_dimension(
    img: GrayImage,
    binarization: AdaptiveBinarizationParams | None = None,
    grid_offsets: int = 1,
) -> float:
    """Box-counting dimension of the adaptively binarized image."""
    params = binarization or AdaptiveBinarizationParams()
    return dimension_from_mask(adaptive_binarize(img, params).as_bool(), grid_offsets)


def fractal_aesthetic_from_dimension(
    d: float, fa: FractalAestheticParams | None = None
) -> float:
    fa = fa or FractalAestheticParams()
    return math.exp(-((d - fa.p) ** 2) / (2.0 * fa.sigma**2))


def fractal_aesthetic(
    img: GrayImage,
    fa: FractalAestheticParams | None = None,
    binarization: AdaptiveBinarizationParams | None = None,
) -> float:
    """Gaussian preference curve evaluated at the image's fractal dimension."""
    return fractal_aesthetic_from_dimension(fractal_dimension(img, binarization), fa)


def skew(img: GrayImage) -> float:
    """Third standardized moment of the raw pixel intensities."""
    v = img.pixels.ravel()
    mu = v.mean()
    dev = v - mu
    var = np.mean(dev * dev)
    if var == 0.0:
        raise UndefinedMeasureError("skew is undefined on a constant image")
    return float(np.mean(dev**3) / var**1.5)


def measure_all(img: GrayImage, config=None) -> MeasureVector:
    vec, _ = measure_all_detailed(img, config)
    return vec


def measure_all_detailed(img: GrayImage, config=None) -> tuple[MeasureVector, dict[str, str]]:
    """Full measure vector plus a note per missing/degenerate entry.

    Shares one histogram, one hysteresis binarization and one adaptive
    binarization across the measures; per-measure failures become missing
    values instead of aborting.
    """
    from .config import RunConfig

    cfg = config or RunConfig()
    values: dict[str, float | int | None] = {}
    notes: dict[str, str] = {}

    def attempt(name, fn):
        try:
            values[name] = fn()
        except (InvalidImageError, InvalidParameterError, UndefinedMeasureError) as exc:
            values[name] = None
            notes[name] = str(exc)

    hist = histogram(img, cfg.bins)
    p = hist.probabilities()
    nonzero = p[p > 0]
    values["S"] = float(-np.sum(nonzero * np.log(nonzero))) + 0.0
    values["E"] = float(np.sum(p * p))

    morph = morphological_binarize(img)
    if morph.degenerate:
        values["T"] = 0
        values["gamma"] = 0
        notes["T"] = notes["gamma"] = "degenerate binarization (constant image)"
    else:
        n_components, holes = binary_topology(morph)
        values["T"] = n_components + holes
        values["gamma"] = n_components - holes

    attempt("C_a", lambda: algorithmic_complexity(img))
    attempt("C_s", lambda: structural_complexity(img, cfg.structural))
    attempt("C_mc", lambda: mc_complexity(img, cfg.lossy))
    attempt("C_mc_E", lambda: mc_complexity_edges(img, cfg.lossy))

    def fractal():
        mask = adaptive_binarize(img, cfg.binarization).as_bool()
        d = dimension_from_mask(mask)
        if not mask.any():
            notes["D"] = "degenerate: empty foreground after adaptive binarization"
        return d

    attempt("D", fractal)
    if values.get("D") is not None:
        values["D_a"] = fractal_aesthetic_from_dimension(values["D"], cfg.fractal_aesthetic)
    else:
        values["D_a"] = None
        notes["D_a"] = "missing fractal dimension"
    attempt("skew", lambda: skew(img))

    return MeasureVector(**values), notes
