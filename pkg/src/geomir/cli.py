"""Command line interface: extract, train, query, serve."""

import json
import shutil
import sys
from pathlib import Path

import click
import numpy as np

from . import index_io
from .errors import GeomirError, UndecodableImage
from .features import FeatureConfig, extract_features
from .geostore import load_geo
from .imaging import normalize_geometry
from .index_io import load_index
from .layout import LayoutConfig, build_graph, step
from .postproc import PostprocConfig, apply_pipeline, fit_pipeline
from .retrieval import QueryConfig, query
from .som import SomConfig, classify_all, train_som

IMAGE_SUFFIXES = {".jpg", ".jpeg", ".png"}


@click.group()
def main():
    """Scene retrieval: index images, train the map, query and serve."""


@main.command()
@click.argument("images_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("-o", "--out", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.option("--threshold", default=20.0, show_default=True, help="Non-edge gradient threshold.")
@click.option("--chroma-bins", default=8, show_default=True, help="Chroma bins per axis.")
def extract(images_dir, out, threshold, chroma_bins):
    """Extract features for every decodable image in IMAGES_DIR."""
    cfg = FeatureConfig(edge_magnitude_threshold=threshold, chroma_bins_per_axis=chroma_bins)
    ids, rows, files = [], [], {}
    for path in sorted(p for p in images_dir.iterdir() if p.suffix.lower() in IMAGE_SUFFIXES):
        try:
            img = normalize_geometry(path.read_bytes())
        except GeomirError as exc:
            click.echo(f"warning: skipping {path.name}: {exc}", err=True)
            continue
        image_id = path.stem
        ids.append(image_id)
        rows.append(extract_features(img, cfg).values)
        files[image_id] = str(path.resolve())
    if not ids:
        click.echo("error: no usable images", err=True)
        sys.exit(1)
    out.parent.mkdir(parents=True, exist_ok=True)
    index_io.write_features(out, ids, np.stack(rows), cfg, files)
    click.echo(f"wrote {len(ids)} feature vectors to {out}")


@main.command()
@click.argument("features_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("-o", "--out", type=click.Path(file_okay=False, path_type=Path), required=True)
@click.option("--geo", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="Geo metadata CSV, copied into the index as structure.csv.")
@click.option("--rows", default=10, show_default=True)
@click.option("--cols", default=10, show_default=True)
@click.option("--epochs", default=20, show_default=True)
@click.option("--seed", default=42, show_default=True)
@click.option("--prune-threshold", default=1e-3, show_default=True)
@click.option("--exaggeration", default=2.3, show_default=True)
def train(features_file, out, geo, rows, cols, epochs, seed, prune_threshold, exaggeration):
    """Fit the pipeline, train the map and classify all images into OUT."""
    try:
        ids, matrix, feature_cfg, files = index_io.read_features(features_file)
        model = fit_pipeline(
            matrix,
            PostprocConfig(prune_threshold=prune_threshold, exaggeration_factor=exaggeration),
        )
        processed = np.stack([apply_pipeline(model, row) for row in matrix])
        grid = train_som(processed, SomConfig(rows=rows, cols=cols, epochs=epochs, seed=seed))
        cmap = classify_all(grid, processed, ids)
    except GeomirError as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        sys.exit(1)
    out.mkdir(parents=True, exist_ok=True)
    if features_file.resolve() != (out / index_io.FEATURES_FILE).resolve():
        shutil.copyfile(features_file, out / index_io.FEATURES_FILE)
    index_io.write_pipeline(out / index_io.PIPELINE_FILE, model)
    index_io.write_som(out / index_io.SOM_FILE, grid)
    index_io.write_classification(out / index_io.CLASSIFICATION_FILE, cmap)
    if geo:
        load_geo(geo)  # validate before installing
        shutil.copyfile(geo, out / index_io.STRUCTURE_FILE)
    click.echo(f"trained {rows}x{cols} map on {len(ids)} images -> {out}")


def _scene_svg(result, graph, thumb_size=24.0) -> str:
    particles = {p["id"]: p for p in graph.snapshot()["particles"]}
    xs = [p["x"] for p in particles.values()]
    ys = [p["y"] for p in particles.values()]
    pad = 60.0
    x0, y0 = min(xs) - pad, min(ys) - pad
    w, h = max(xs) - x0 + pad, max(ys) - y0 + pad
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0:.1f} {y0:.1f} {w:.1f} {h:.1f}">'
    ]
    for p in particles.values():
        if p["level"] in ("root", "country", "city"):
            r = {"root": 6, "country": 12, "city": 8}[p["level"]]
            parts.append(f'<circle cx="{p["x"]:.2f}" cy="{p["y"]:.2f}" r="{r}" fill="#888"/>')
            if p["payload"]:
                parts.append(
                    f'<text x="{p["x"]:.2f}" y="{p["y"] - r - 2:.2f}" font-size="10" '
                    f'text-anchor="middle">{p["payload"]}</text>'
                )
    for image_id in result.draw_order:  # painter's order: most similar last, on top
        p = particles[f"img:{image_id}"]
        half = thumb_size / 2
        parts.append(
            f'<rect x="{p["x"] - half:.2f}" y="{p["y"] - half:.2f}" width="{thumb_size}" '
            f'height="{thumb_size}" fill="#4a90d9" stroke="#fff"><title>{image_id}</title></rect>'
        )
    parts.append("</svg>")
    return "\n".join(parts)


@main.command(name="query")
@click.argument("image_path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--index", "index_dir", envvar="GEOMIR_INDEX_DIR", required=True,
              type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--radius", default=1, show_default=True, help="SOM neighborhood radius.")
@click.option("--top", default=200, show_default=True, help="Maximum images returned.")
@click.option("--json", "as_json", flag_value=True, default=True, help="JSON report (default).")
@click.option("--svg", "as_svg", is_flag=True, help="Emit an SVG scene after 2000 layout steps.")
def query_cmd(image_path, index_dir, radius, top, as_json, as_svg):
    """Query the index with IMAGE_PATH."""
    try:
        index = load_index(index_dir)
        result = query(
            image_path.read_bytes(),
            index,
            QueryConfig(neighborhood_radius=radius, max_images=top),
        )
    except GeomirError as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        sys.exit(1)
    if as_svg:
        cfg = LayoutConfig()
        graph = build_graph(result.geo_tree, cfg)
        for _ in range(2000):
            step(graph, cfg)
        click.echo(_scene_svg(result, graph))
    else:
        click.echo(json.dumps(result.to_dict(), indent=2))


@main.command()
@click.option("--index", "index_dir", envvar="GEOMIR_INDEX_DIR", required=True,
              type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(index_dir, host, port):
    """Serve the HTTP API over a loaded index."""
    import uvicorn

    from .service import create_app

    try:
        index = load_index(index_dir)
    except GeomirError as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        sys.exit(1)
    uvicorn.run(create_app(index), host=host, port=port)


if __name__ == "__main__":
    main()
