"""Kohonen self-organizing map: seeded online training, BMU queries,
per-image classification and grid-neighborhood enumeration.

Training is fully deterministic given (matrix, config): weights start
as seeded samples of the training rows, presentation order is a seeded
shuffle per epoch, and the learning rate / neighborhood radius decay
exponentially from their start to end values across all updates.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DimensionMismatch, EmptyDataset, InvalidNode


@dataclass(frozen=True)
class SomConfig:
    rows: int = 10
    cols: int = 10
    epochs: int = 20
    alpha_start: float = 0.5
    alpha_end: float = 0.01
    sigma_start: float = 0.0  # 0 means max(rows, cols) / 2
    sigma_end: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.rows * self.cols < 2:
            raise ValueError("grid needs at least 2 nodes")
        if not (0 < self.alpha_end <= self.alpha_start):
            raise ValueError("need 0 < alpha_end <= alpha_start")
        if self.resolved_sigma_start < self.sigma_end or self.sigma_end <= 0:
            raise ValueError("need 0 < sigma_end <= sigma_start")

    @property
    def resolved_sigma_start(self) -> float:
        return self.sigma_start if self.sigma_start > 0 else max(self.rows, self.cols) / 2.0


@dataclass(frozen=True)
class SomGrid:
    rows: int
    cols: int
    dim: int
    weights: np.ndarray  # (rows*cols, dim)
    config: SomConfig = field(default_factory=SomConfig)

    @property
    def n_nodes(self) -> int:
        return self.rows * self.cols

    def node_coords(self, node: int) -> tuple:
        return divmod(node, self.cols)


@dataclass(frozen=True)
class ClassificationMap:
    assignments: dict  # image id -> node index
    distances: dict  # image id -> distance to assigned node

    def members(self, node: int) -> list:
        return sorted(i for i, n in self.assignments.items() if n == node)


def _grid_coords(rows: int, cols: int) -> np.ndarray:
    rr, cc = np.divmod(np.arange(rows * cols), cols)
    return np.stack([rr, cc], axis=1).astype(np.float64)


def train_som(matrix: np.ndarray, cfg: SomConfig = SomConfig()) -> SomGrid:
    matrix = np.ascontiguousarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] == 0:
        raise EmptyDataset("need at least one training vector")
    if not np.isfinite(matrix).all():
        raise DimensionMismatch("training matrix contains non-finite values")
    n, dim = matrix.shape
    n_nodes = cfg.rows * cfg.cols

    rng = np.random.default_rng(cfg.seed)
    weights = matrix[rng.integers(0, n, size=n_nodes)].copy()

    order = np.concatenate([rng.permutation(n) for _ in range(cfg.epochs)]).astype(np.int64)
    total = order.shape[0]
    progress = np.arange(total, dtype=np.float64) / max(total - 1, 1)
    alphas = cfg.alpha_start * (cfg.alpha_end / cfg.alpha_start) ** progress
    s0 = cfg.resolved_sigma_start
    sigmas = s0 * (cfg.sigma_end / s0) ** progress

    coords = _grid_coords(cfg.rows, cfg.cols)
    diff = coords[:, None, :] - coords[None, :, :]
    grid_d2 = (diff**2).sum(axis=2)

    _kernels.som_train_inplace(weights, matrix, order, alphas, sigmas, grid_d2)
    if not np.isfinite(weights).all():
        raise ArithmeticError("training produced non-finite weights")
    return SomGrid(rows=cfg.rows, cols=cfg.cols, dim=dim, weights=weights, config=cfg)


def bmu(grid: SomGrid, vector: np.ndarray) -> tuple:
    """(node index, Euclidean distance) of the best-matching unit; ties -> lowest index."""
    vector = np.asarray(vector, dtype=np.float64)
    if vector.shape != (grid.dim,):
        raise DimensionMismatch(f"expected length {grid.dim}, got {vector.shape}")
    d2 = ((grid.weights - vector) ** 2).sum(axis=1)
    node = int(np.argmin(d2))
    return node, float(math.sqrt(d2[node]))


def classify_all(grid: SomGrid, matrix: np.ndarray, ids: list) -> ClassificationMap:
    matrix = np.asarray(matrix, dtype=np.float64)
    if len(matrix) != len(ids):
        raise DimensionMismatch(f"{len(matrix)} rows vs {len(ids)} ids")
    assignments, distances = {}, {}
    for image_id, row in zip(ids, matrix):
        node, dist = bmu(grid, row)
        assignments[image_id] = node
        distances[image_id] = dist
    return ClassificationMap(assignments=assignments, distances=distances)


def neighbor_clusters(grid: SomGrid, node: int, radius: int) -> list:
    """Nodes within Chebyshev grid distance radius, nearest (Euclidean) first."""
    if not 0 <= node < grid.n_nodes:
        raise InvalidNode(str(node))
    r0, c0 = grid.node_coords(node)
    found = []
    for i in range(grid.n_nodes):
        r, c = grid.node_coords(i)
        if max(abs(r - r0), abs(c - c0)) <= radius:
            found.append((math.hypot(r - r0, c - c0), i))
    return [i for _, i in sorted(found)]


def quantization_error(grid: SomGrid, matrix: np.ndarray) -> float:
    """Mean BMU distance over the rows of matrix."""
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.shape[0] == 0:
        raise EmptyDataset("no rows")
    return float(np.mean([bmu(grid, row)[1] for row in matrix]))
