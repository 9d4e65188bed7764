"""Query-by-image: run the feature pipeline on the query bytes, gather
the BMU neighborhood, rank retrieved images and compute the painter's
draw order (least similar painted first, most similar last/on top)."""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyIndex
from .features import extract_features
from .geostore import GeoTree, build_hierarchy
from .imaging import normalize_geometry
from .postproc import apply_pipeline
from .som import bmu, neighbor_clusters


@dataclass(frozen=True)
class QueryConfig:
    neighborhood_radius: int = 1
    max_images: int = 200

    def __post_init__(self):
        if self.neighborhood_radius < 0:
            raise ValueError("neighborhood_radius must be >= 0")
        if self.max_images < 1:
            raise ValueError("max_images must be >= 1")


@dataclass(frozen=True)
class RetrievedCluster:
    node: int
    distance: float  # cluster weight vector to query
    image_ids: list


@dataclass(frozen=True)
class QueryResult:
    processed_query: np.ndarray
    bmu_node: int
    bmu_distance: float
    clusters: list  # RetrievedCluster, as retrieved (node-distance order)
    image_distances: dict  # image id -> distance to query
    geo_tree: GeoTree
    draw_order: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "bmu": {"node": self.bmu_node, "distance": self.bmu_distance},
            "clusters": [
                {"node": c.node, "distance": c.distance, "images": list(c.image_ids)}
                for c in self.clusters
            ],
            "images": [
                {"id": i, "distance": self.image_distances[i]}
                for i in sorted(self.image_distances, key=lambda i: (self.image_distances[i], i))
            ],
            "draw_order": list(self.draw_order),
            "geo": {
                country.name: {
                    "images": list(country.images),
                    "cities": {city.name: list(city.images) for city in country.cities},
                }
                for country in self.geo_tree.countries
            },
        }


def draw_order(clusters, image_distances) -> list:
    """Painter's order: clusters by descending distance to the query, images
    within a cluster by descending distance; all ties by ascending id."""
    ordered = []
    for cluster in sorted(clusters, key=lambda c: (-c.distance, c.node)):
        ordered.extend(sorted(cluster.image_ids, key=lambda i: (-image_distances[i], i)))
    return ordered


def query(image_bytes: bytes, index, cfg: QueryConfig = QueryConfig()) -> QueryResult:
    """Full retrieval pass against a loaded Index (see geomir.index_io)."""
    if not index.ids:
        raise EmptyIndex("index contains no images")

    img = normalize_geometry(image_bytes)
    raw = extract_features(img, index.feature_config).values
    q = apply_pipeline(index.pipeline, raw)

    node, node_dist = bmu(index.grid, q)
    nodes = neighbor_clusters(index.grid, node, cfg.neighborhood_radius)

    candidates = []
    for n in nodes:
        for image_id in index.classification.members(n):
            row = index.processed[index.row_of(image_id)]
            candidates.append((image_id, n, float(np.linalg.norm(q - row))))

    candidates.sort(key=lambda t: (t[2], t[0]))
    survivors = candidates[: cfg.max_images]
    keep = {image_id for image_id, _, _ in survivors}
    distances = {image_id: d for image_id, _, d in survivors}

    clusters = []
    for n in nodes:
        members = [i for i in index.classification.members(n) if i in keep]
        if not members:
            continue
        cdist = float(math.sqrt(((q - index.grid.weights[n]) ** 2).sum()))
        clusters.append(RetrievedCluster(node=n, distance=cdist, image_ids=members))

    tree = build_hierarchy(index.geo, sorted(keep))
    return QueryResult(
        processed_query=q,
        bmu_node=node,
        bmu_distance=node_dist,
        clusters=clusters,
        image_distances=distances,
        geo_tree=tree,
        draw_order=draw_order(clusters, distances),
    )
