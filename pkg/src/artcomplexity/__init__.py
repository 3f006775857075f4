"""Complexity measures for generative art images.

Per-image measures (entropy through fractal aesthetics), the geometric
complexity score for layered forms, corpus ingestion with caching, and
Pearson correlation reports binding measures to aesthetic scores.
"""

__version__ = "0.1.0"

from .codec import CODEC_VERSION, LossyCodecParams, lossy_encode, lzw_compress, lzw_decompress
from .config import RunConfig
from .corpus import CorpusRecord, MeasureCache, load_manifest, run_corpus
from .geometry import LayeredForm, layer_angle_qcd, layer_convexity_deviation, physical_complexity
from .image import BinaryImage, GrayImage, Histogram, TriLevelImage, histogram, load_image, to_grayscale
from .measures import (
    FractalAestheticParams,
    MeasureVector,
    algorithmic_complexity,
    contours,
    energy,
    entropy,
    euler,
    fractal_aesthetic,
    fractal_dimension,
    measure_all,
    mc_complexity,
    mc_complexity_edges,
    skew,
    structural_complexity,
)
from .preprocess import (
    AdaptiveBinarizationParams,
    StructuralParams,
    adaptive_binarize,
    coarse_grain,
    morphological_binarize,
    sobel_edges,
)
from .stats import CorrelationMatrix, correlation_matrix, p_value, pearson

__all__ = [
    "AdaptiveBinarizationParams",
    "BinaryImage",
    "CODEC_VERSION",
    "CorpusRecord",
    "CorrelationMatrix",
    "FractalAestheticParams",
    "GrayImage",
    "Histogram",
    "LayeredForm",
    "LossyCodecParams",
    "MeasureCache",
    "MeasureVector",
    "RunConfig",
    "StructuralParams",
    "TriLevelImage",
    "adaptive_binarize",
    "algorithmic_complexity",
    "coarse_grain",
    "contours",
    "correlation_matrix",
    "energy",
    "entropy",
    "euler",
    "fractal_aesthetic",
    "fractal_dimension",
    "histogram",
    "layer_angle_qcd",
    "layer_convexity_deviation",
    "load_image",
    "load_manifest",
    "lossy_encode",
    "lzw_compress",
    "lzw_decompress",
    "mc_complexity",
    "mc_complexity_edges",
    "measure_all",
    "morphological_binarize",
    "p_value",
    "pearson",
    "physical_complexity",
    "run_corpus",
    "skew",
    "sobel_edges",
    "structural_complexity",
    "to_grayscale",
]
