from __future__ import annotations

import numpy as np
import pytest

from artcomplexity.image import GrayImage


def disk_mask(size: int, cx: float, cy: float, radius: float) -> np.ndarray:
    yy, xx = np.mgrid[0:size, 0:size]
    return (xx - cx) ** 2 + (yy - cy) ** 2 <= radius**2


def make_disk_image(size=64, background=0.2, foreground=0.9, radius=None) -> GrayImage:
    radius = radius or size // 4
    px = np.full((size, size), background)
    px[disk_mask(size, size / 2, size / 2, radius)] = foreground
    return GrayImage(px)


def make_annulus_image(size=64, background=0.2, foreground=0.9) -> GrayImage:
    px = np.full((size, size), background)
    outer = disk_mask(size, size / 2, size / 2, size / 3)
    inner = disk_mask(size, size / 2, size / 2, size / 6)
    px[outer & ~inner] = foreground
    return GrayImage(px)


def random_blob_image(rng: np.random.Generator, size=48) -> GrayImage:
    """Low-frequency random field, useful for topology/measure properties."""
    base = rng.random((6, 6))
    px = np.kron(base, np.ones((size // 6, size // 6)))
    return GrayImage(np.clip(px, 0.0, 1.0))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)
