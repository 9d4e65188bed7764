"""Edge-direction color histogram.

Sobel gradients on L* split pixels into 8 orientation sectors plus a
non-edge class; each class holds a quantized a*b* chroma histogram, so
the full descriptor has 9 * B^2 cells (576 with the default B=8).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .imaging import LabImage, StandardImage, to_lab

N_DIRECTIONS = 8


@dataclass(frozen=True)
class FeatureConfig:
    direction_bins: int = N_DIRECTIONS
    edge_magnitude_threshold: float = 20.0
    chroma_bins_per_axis: int = 8
    chroma_range: tuple = (-128.0, 128.0)

    def __post_init__(self):
        if self.direction_bins != N_DIRECTIONS:
            raise ValueError("direction_bins is fixed at 8")
        if self.chroma_bins_per_axis < 2:
            raise ValueError("chroma_bins_per_axis must be >= 2")
        if self.edge_magnitude_threshold < 0:
            raise ValueError("edge_magnitude_threshold must be >= 0")

    @property
    def dimension(self) -> int:
        return (self.direction_bins + 1) * self.chroma_bins_per_axis**2


@dataclass(frozen=True)
class GradientField:
    gx: np.ndarray
    gy: np.ndarray


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray
    normalized: bool = field(default=False)


def sobel(lab: LabImage) -> GradientField:
    """3x3 Sobel on the L* channel; borders replicate the nearest edge pixel.

    gx is positive for L* increasing to the right, gy for L* increasing
    downward (row-major).
    """
    L = np.pad(lab.pixels[..., 0], 1, mode="edge")
    gx = (
        (L[:-2, 2:] - L[:-2, :-2])
        + 2.0 * (L[1:-1, 2:] - L[1:-1, :-2])
        + (L[2:, 2:] - L[2:, :-2])
    )
    gy = (
        (L[2:, :-2] - L[:-2, :-2])
        + 2.0 * (L[2:, 1:-1] - L[:-2, 1:-1])
        + (L[2:, 2:] - L[:-2, 2:])
    )
    return GradientField(gx=gx, gy=gy)


def edge_category(gx: float, gy: float, cfg: FeatureConfig) -> int:
    """Sector 0..7 for edges, 8 for non-edges (gradient magnitude below threshold)."""
    if math.hypot(gx, gy) < cfg.edge_magnitude_threshold:
        return N_DIRECTIONS
    theta = math.atan2(gy, gx) % math.pi
    if theta >= math.pi:
        theta = 0.0
    return min(int(theta / (math.pi / N_DIRECTIONS)), N_DIRECTIONS - 1)


def chroma_bin(a: float, b: float, cfg: FeatureConfig) -> int:
    """Uniform B x B quantization of (a*, b*) over the clamped chroma range."""
    B = cfg.chroma_bins_per_axis
    lo, hi = cfg.chroma_range
    cell = (hi - lo) / B
    ia = min(int((min(max(a, lo), hi) - lo) / cell), B - 1)
    ib = min(int((min(max(b, lo), hi) - lo) / cell), B - 1)
    return ia * B + ib


def raw_histogram(lab: LabImage, cfg: FeatureConfig) -> np.ndarray:
    grad = sobel(lab)
    return _kernels.edge_color_hist(
        grad.gx,
        grad.gy,
        lab.pixels[..., 1],
        lab.pixels[..., 2],
        cfg.edge_magnitude_threshold,
        N_DIRECTIONS,
        cfg.chroma_bins_per_axis,
    )


def extract_features(img: StandardImage, cfg: FeatureConfig = FeatureConfig()) -> FeatureVector:
    """L1-normalized edge-direction color histogram of a standard image."""
    counts = raw_histogram(to_lab(img), cfg)
    return FeatureVector(values=counts / counts.sum(), normalized=True)
