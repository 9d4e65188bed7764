"""On-disk index: one JSON document per component plus the geo CSV.

    features.json        ids, raw feature matrix, feature config, file map
    pipeline.json        keep mask and min/max stats with their config
    som.json             trained grid weights with their config
    classification.json  per-image node assignment and distance
    structure.csv        geo metadata passthrough (image_id,country,city)

Every JSON component carries format_version and a kind tag; readers
reject anything they were not written for.
"""

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .errors import IndexFormatError
from .features import FeatureConfig
from .geostore import GeoIndex, load_geo
from .postproc import PipelineModel, PostprocConfig, apply_pipeline
from .som import ClassificationMap, SomConfig, SomGrid

FORMAT_VERSION = 1

FEATURES_FILE = "features.json"
PIPELINE_FILE = "pipeline.json"
SOM_FILE = "som.json"
CLASSIFICATION_FILE = "classification.json"
STRUCTURE_FILE = "structure.csv"


@dataclass(frozen=True)
class Index:
    ids: list
    feature_matrix: np.ndarray  # raw, L1-normalized
    feature_config: FeatureConfig
    files: dict  # image id -> path to the source image
    pipeline: PipelineModel
    grid: SomGrid
    classification: ClassificationMap
    geo: GeoIndex
    processed: np.ndarray  # feature_matrix through the pipeline

    def row_of(self, image_id: str) -> int:
        return self.ids.index(image_id)


def _dump(path: Path, kind: str, payload: dict):
    doc = {"format_version": FORMAT_VERSION, "kind": kind}
    doc.update(payload)
    path.write_text(json.dumps(doc), encoding="utf-8")


def _load(path: Path, kind: str) -> dict:
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise IndexFormatError(f"{path}: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format_version") != FORMAT_VERSION:
        raise IndexFormatError(
            f"{path}: format_version {doc.get('format_version')!r}, reader expects {FORMAT_VERSION}"
        )
    if doc.get("kind") != kind:
        raise IndexFormatError(f"{path}: kind {doc.get('kind')!r}, expected {kind!r}")
    return doc


def write_features(path, ids, matrix, cfg: FeatureConfig, files: dict):
    _dump(
        Path(path),
        "features",
        {
            "config": asdict(cfg),
            "ids": list(ids),
            "matrix": np.asarray(matrix).tolist(),
            "files": {k: str(v) for k, v in files.items()},
        },
    )


def read_features(path):
    doc = _load(Path(path), "features")
    cfg_raw = dict(doc["config"])
    cfg_raw["chroma_range"] = tuple(cfg_raw["chroma_range"])
    cfg = FeatureConfig(**cfg_raw)
    return list(doc["ids"]), np.asarray(doc["matrix"], dtype=np.float64), cfg, doc.get("files", {})


def write_pipeline(path, model: PipelineModel):
    _dump(
        Path(path),
        "pipeline",
        {
            "config": asdict(model.config),
            "keep_mask": [bool(v) for v in model.keep_mask],
            "minima": model.minima.tolist(),
            "maxima": model.maxima.tolist(),
        },
    )


def read_pipeline(path) -> PipelineModel:
    doc = _load(Path(path), "pipeline")
    return PipelineModel(
        keep_mask=np.asarray(doc["keep_mask"], dtype=bool),
        minima=np.asarray(doc["minima"], dtype=np.float64),
        maxima=np.asarray(doc["maxima"], dtype=np.float64),
        config=PostprocConfig(**doc["config"]),
    )


def write_som(path, grid: SomGrid):
    _dump(
        Path(path),
        "som",
        {
            "config": asdict(grid.config),
            "rows": grid.rows,
            "cols": grid.cols,
            "dim": grid.dim,
            "weights": grid.weights.tolist(),
        },
    )


def read_som(path) -> SomGrid:
    doc = _load(Path(path), "som")
    return SomGrid(
        rows=doc["rows"],
        cols=doc["cols"],
        dim=doc["dim"],
        weights=np.asarray(doc["weights"], dtype=np.float64),
        config=SomConfig(**doc["config"]),
    )


def write_classification(path, cmap: ClassificationMap):
    _dump(
        Path(path),
        "classification",
        {
            "assignments": {k: int(v) for k, v in cmap.assignments.items()},
            "distances": {k: float(v) for k, v in cmap.distances.items()},
        },
    )


def read_classification(path) -> ClassificationMap:
    doc = _load(Path(path), "classification")
    return ClassificationMap(assignments=dict(doc["assignments"]), distances=dict(doc["distances"]))


def load_index(index_dir) -> Index:
    """Load all five components and precompute the processed matrix."""
    d = Path(index_dir)
    for name in (FEATURES_FILE, PIPELINE_FILE, SOM_FILE, CLASSIFICATION_FILE, STRUCTURE_FILE):
        if not (d / name).exists():
            raise IndexFormatError(f"missing index component {name} in {d}")
    ids, matrix, feature_cfg, files = read_features(d / FEATURES_FILE)
    pipeline = read_pipeline(d / PIPELINE_FILE)
    grid = read_som(d / SOM_FILE)
    classification = read_classification(d / CLASSIFICATION_FILE)
    geo = load_geo(d / STRUCTURE_FILE)
    processed = (
        np.stack([apply_pipeline(pipeline, row) for row in matrix])
        if len(matrix)
        else np.empty((0, pipeline.kept_dimension))
    )
    return Index(
        ids=ids,
        feature_matrix=matrix,
        feature_config=feature_cfg,
        files=files,
        pipeline=pipeline,
        grid=grid,
        classification=classification,
        geo=geo,
        processed=processed,
    )
