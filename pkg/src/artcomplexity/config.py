"""Run configuration: every measure parameter in one serializable block.

Defaults match the reference settings used throughout: coarse-grain
(r_cg, delta) = (5, 0.23), adaptive binarization radius 2, preference
curve (p, sigma) = (1.35, 0.2), lossy quality 0.75, 256 histogram bins.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .codec import CODEC_VERSION, LossyCodecParams
from .errors import InvalidParameterError
from .measures import FractalAestheticParams
from .preprocess import AdaptiveBinarizationParams, StructuralParams

# Fixed implementation conventions, recorded in every report so results
# can be compared across tools that chose differently.
CONVENTIONS = {
    "luma_weights": "rec709 (0.2126, 0.7152, 0.0722)",
    "intensity": "sources scaled to [0,1] floats (8-bit / 255)",
    "eta_orientation": "darkness fraction, 1 - intensity",
    "coarse_grain_input": "raw intensity (not pre-binarized)",
    "connectivity": "8-connected foreground, 4-connected background",
    "binarize_threshold": "Otsu strong + 0.5x weak hysteresis, ties to high split",
    "quantiles": "linear interpolation",
    "vertex_angles": "unsigned angle between edge rays, degrees in (0, 180]",
    "box_grid": "origin-anchored, partial cells included, power-of-two sizes",
    "lzw_variant": "variable 9-12 bit codes, MSB-first, clear code on full dictionary",
    "raw_size": "width x height bytes (8-bit gray)",
}


@dataclass(frozen=True)
class RunConfig:
    structural: StructuralParams = field(default_factory=StructuralParams)
    binarization: AdaptiveBinarizationParams = field(default_factory=AdaptiveBinarizationParams)
    fractal_aesthetic: FractalAestheticParams = field(default_factory=FractalAestheticParams)
    lossy: LossyCodecParams = field(default_factory=LossyCodecParams)
    bins: int = 256
    workers: int = 1
    cache_path: str | None = None
    output_format: str = "csv"

    def __post_init__(self):
        if self.bins < 2:
            raise InvalidParameterError(f"bins must be >= 2, got {self.bins}")
        if self.workers < 1:
            raise InvalidParameterError(f"workers must be >= 1, got {self.workers}")
        if self.output_format not in ("csv", "json"):
            raise InvalidParameterError(f"output format must be csv or json, got {self.output_format!r}")

    def to_dict(self) -> dict:
        return {
            "rcg": self.structural.r_cg,
            "delta": self.structural.delta,
            "fractal_radius": self.binarization.r,
            "fa_peak": self.fractal_aesthetic.p,
            "fa_sigma": self.fractal_aesthetic.sigma,
            "quality": self.lossy.quality,
            "bins": self.bins,
            "codec_version": CODEC_VERSION,
        }

    def fingerprint(self) -> str:
        """Hash of every parameter a measure value depends on."""
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def replace(self, **kwargs) -> "RunConfig":
        from dataclasses import replace as _replace

        return _replace(self, **kwargs)


_KEYS = ("rcg", "delta", "fractal_radius", "fa_peak", "fa_sigma", "quality",
         "bins", "workers", "cache", "format")


def parse_config_file(path: str | Path) -> dict[str, str]:
    """Read a key=value config file; # starts a comment, blanks ignored."""
    settings: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidParameterError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KEYS:
            raise InvalidParameterError(f"{path}:{lineno}: unknown key {key!r}")
        settings[key] = value
    return settings


def build_config(settings: dict) -> RunConfig:
    """RunConfig from a flat settings mapping (flag/config-file names)."""
    return RunConfig(
        structural=StructuralParams(
            r_cg=int(settings.get("rcg", 5)),
            delta=float(settings.get("delta", 0.23)),
        ),
        binarization=AdaptiveBinarizationParams(r=int(settings.get("fractal_radius", 2))),
        fractal_aesthetic=FractalAestheticParams(
            p=float(settings.get("fa_peak", 1.35)),
            sigma=float(settings.get("fa_sigma", 0.2)),
        ),
        lossy=LossyCodecParams(quality=float(settings.get("quality", 0.75))),
        bins=int(settings.get("bins", 256)),
        workers=int(settings.get("workers", 1)),
        cache_path=settings.get("cache") or None,
        output_format=str(settings.get("format", "csv")),
    )
