import io
import sys
from pathlib import Path

import numpy as np
import pytest
from PIL import Image

sys.path.insert(0, str(Path(__file__).parent))

from geomir import index_io
from geomir.features import FeatureConfig, extract_features
from geomir.imaging import StandardImage, normalize_geometry
from geomir.postproc import PostprocConfig, apply_pipeline, fit_pipeline
from geomir.som import SomConfig, classify_all, train_som

GROUPS = ("warm", "cool", "stripe")
PER_GROUP = 20


def encode_png(arr: np.ndarray) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(arr).save(buf, format="PNG")
    return buf.getvalue()


def solid(w, h, rgb) -> np.ndarray:
    return np.full((h, w, 3), rgb, dtype=np.uint8)


def std_image(arr: np.ndarray) -> StandardImage:
    h, w = arr.shape[:2]
    return StandardImage(width=w, height=h, pixels=arr)


WARM_RANGE = ((150, 25, 0), (255, 130, 80))
COOL_RANGE = ((0, 60, 150), (80, 160, 255))


def _smooth(rng, lo, hi):
    """640x480 bilinear blend of four random corner colors sampled in
    [lo, hi) per channel; gradients stay far below the edge threshold."""
    corners = rng.integers(lo, hi, size=(2, 2, 3)).astype(np.float64)
    ty = np.linspace(0.0, 1.0, 480)[:, None, None]
    tx = np.linspace(0.0, 1.0, 640)[None, :, None]
    top = corners[0, 0] * (1.0 - tx) + corners[0, 1] * tx
    bottom = corners[1, 0] * (1.0 - tx) + corners[1, 1] * tx
    return np.clip(top * (1.0 - ty) + bottom * ty, 0, 255).astype(np.uint8)


def _stripes(rng, period):
    """High-frequency vertical stripes in near-neutral tones; the group is
    characterized by its edges, not its chroma."""
    bright = (rng.integers(225, 250) + rng.integers(-4, 5, size=3)).astype(np.uint8)
    dark = (rng.integers(5, 25) + rng.integers(-4, 5, size=3)).astype(np.uint8)
    idx = (np.arange(640) // period % 2).astype(bool)
    line = np.where(idx[:, None], bright[None, :], dark[None, :])
    return np.broadcast_to(line[None, :, :], (480, 640, 3)).copy()


def make_fixture_image(group: str, k: int) -> np.ndarray:
    # the seed stride keeps all 60 feature vectors distinct (self-retrieval
    # needs a unique zero-distance match)
    rng = np.random.default_rng(GROUPS.index(group) * 1000 + k * 7)
    if group == "warm":
        return _smooth(rng, *WARM_RANGE)
    if group == "cool":
        return _smooth(rng, *COOL_RANGE)
    return _stripes(rng, 5 + k)


GEO = {
    "warm": ("Warmland", ["Amber", "Sienna", ""]),
    "cool": ("Coolland", ["Azure", "Cyan", ""]),
    "stripe": ("Stripeland", ["Grid", "Weave", ""]),
}


@pytest.fixture(scope="session")
def fixture_corpus(tmp_path_factory):
    """60 PNGs in 3 visual groups plus their geo CSV."""
    root = tmp_path_factory.mktemp("corpus")
    images_dir = root / "images"
    images_dir.mkdir()
    rows = ["image_id,country,city"]
    by_group = {}
    for group in GROUPS:
        country, cities = GEO[group]
        ids = []
        for k in range(PER_GROUP):
            image_id = f"{group}{k:02d}"
            (images_dir / f"{image_id}.png").write_bytes(encode_png(make_fixture_image(group, k)))
            rows.append(f"{image_id},{country},{cities[k % len(cities)]}")
            ids.append(image_id)
        by_group[group] = ids
    geo_csv = root / "geo.csv"
    geo_csv.write_text("\n".join(rows) + "\n", encoding="utf-8")
    return {"images_dir": images_dir, "geo_csv": geo_csv, "by_group": by_group}


@pytest.fixture(scope="session")
def fixture_index(fixture_corpus, tmp_path_factory):
    """Full on-disk index over the fixture corpus, seed 42, then loaded."""
    index_dir = tmp_path_factory.mktemp("index")
    cfg = FeatureConfig()
    ids, rows, files = [], [], {}
    for path in sorted(fixture_corpus["images_dir"].iterdir()):
        img = normalize_geometry(path.read_bytes())
        ids.append(path.stem)
        rows.append(extract_features(img, cfg).values)
        files[path.stem] = str(path)
    matrix = np.stack(rows)
    model = fit_pipeline(matrix, PostprocConfig())
    processed = np.stack([apply_pipeline(model, r) for r in matrix])
    grid = train_som(processed, SomConfig(seed=42))
    cmap = classify_all(grid, processed, ids)

    index_io.write_features(index_dir / index_io.FEATURES_FILE, ids, matrix, cfg, files)
    index_io.write_pipeline(index_dir / index_io.PIPELINE_FILE, model)
    index_io.write_som(index_dir / index_io.SOM_FILE, grid)
    index_io.write_classification(index_dir / index_io.CLASSIFICATION_FILE, cmap)
    (index_dir / index_io.STRUCTURE_FILE).write_bytes(fixture_corpus["geo_csv"].read_bytes())
    return {"dir": index_dir, "index": index_io.load_index(index_dir), "corpus": fixture_corpus}
