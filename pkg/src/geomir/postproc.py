"""Dataset-wide feature post-processing.

Fit once on the indexed feature matrix, then replay the identical
pipeline on every query vector: prune dead dimensions, min-max scale to
[0, 1], exaggerate mid-range values with
X_new = (a - 1) * (1 - sin(X * pi / 2)) + 1, and rescale the result
back to [0, 1] for Euclidean-distance SOM training.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AllPruned, DimensionMismatch, EmptyDataset

MODE_LITERAL = "literal"
MODE_MULTIPLICATIVE = "multiplicative"


@dataclass(frozen=True)
class PostprocConfig:
    prune_threshold: float = 1e-3
    exaggeration_factor: float = 2.3
    exaggeration_mode: str = MODE_LITERAL

    def __post_init__(self):
        if self.prune_threshold < 0:
            raise ValueError("prune_threshold must be >= 0")
        if self.exaggeration_factor < 1:
            raise ValueError("exaggeration_factor must be >= 1")
        if self.exaggeration_mode not in (MODE_LITERAL, MODE_MULTIPLICATIVE):
            raise ValueError(f"unknown exaggeration_mode {self.exaggeration_mode!r}")


@dataclass(frozen=True)
class PipelineModel:
    keep_mask: np.ndarray  # bool, raw dimensionality
    minima: np.ndarray  # per kept dimension
    maxima: np.ndarray
    config: PostprocConfig = field(default_factory=PostprocConfig)

    @property
    def raw_dimension(self) -> int:
        return int(self.keep_mask.shape[0])

    @property
    def kept_dimension(self) -> int:
        return int(self.keep_mask.sum())


def fit_pipeline(matrix: np.ndarray, cfg: PostprocConfig = PostprocConfig()) -> PipelineModel:
    """Learn the keep mask and per-dimension min/max from an N x D matrix."""
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] == 0:
        raise EmptyDataset("need at least one feature vector")
    keep = matrix.max(axis=0) >= cfg.prune_threshold
    if not keep.any():
        raise AllPruned(f"no dimension reaches threshold {cfg.prune_threshold}")
    kept = matrix[:, keep]
    return PipelineModel(
        keep_mask=keep, minima=kept.min(axis=0), maxima=kept.max(axis=0), config=cfg
    )


def exaggerate(x: float, a: float) -> float:
    """(a-1)*(1 - sin(x*pi/2)) + 1 on x clamped to [0, 1]; decreasing from a to 1."""
    x = min(max(x, 0.0), 1.0)
    return (a - 1.0) * (1.0 - math.sin(x * math.pi / 2.0)) + 1.0


def _multiplicative_peak(a: float) -> float:
    # max over [0,1] of x * ((a-1)*(1-sin(x*pi/2)) + 1), sampled densely once
    xs = np.linspace(0.0, 1.0, 4097)
    return float(np.max(xs * ((a - 1.0) * (1.0 - np.sin(xs * math.pi / 2.0)) + 1.0)))


def apply_pipeline(model: PipelineModel, vector: np.ndarray) -> np.ndarray:
    """Prune, min-max scale, exaggerate and renormalize one raw feature vector."""
    vector = np.asarray(vector, dtype=np.float64)
    if vector.shape != (model.raw_dimension,):
        raise DimensionMismatch(
            f"expected length {model.raw_dimension}, got {vector.shape}"
        )
    v = vector[model.keep_mask]
    span = model.maxima - model.minima
    scaled = np.zeros_like(v)
    nz = span > 0
    scaled[nz] = (v[nz] - model.minima[nz]) / span[nz]
    np.clip(scaled, 0.0, 1.0, out=scaled)

    a = model.config.exaggeration_factor
    if a == 1.0:
        # degenerate case: the formula is constant 1; pass min-max values through
        return scaled
    ex = (a - 1.0) * (1.0 - np.sin(scaled * math.pi / 2.0)) + 1.0
    if model.config.exaggeration_mode == MODE_MULTIPLICATIVE:
        return scaled * ex / _multiplicative_peak(a)
    return (ex - 1.0) / (a - 1.0)


def apply_pipeline_matrix(model: PipelineModel, matrix: np.ndarray) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=np.float64)
    return np.stack([apply_pipeline(model, row) for row in matrix]) if len(matrix) else (
        np.empty((0, model.kept_dimension))
    )
