import numpy as np
import pytest

from geomir.errors import EmptyIndex, UndecodableImage
from geomir.retrieval import QueryConfig, RetrievedCluster, draw_order, query


def order_oracle(clusters, distances):
    pairs = []
    for c in clusters:
        for i in c.image_ids:
            pairs.append((-c.distance, c.node, -distances[i], i))
    return [p[3] for p in sorted(pairs)]


class TestDrawOrder:
    def test_far_cluster_first(self):
        clusters = [
            RetrievedCluster(node=1, distance=0.2, image_ids=["n1", "n2"]),
            RetrievedCluster(node=2, distance=0.5, image_ids=["f1", "f2"]),
        ]
        d = {"n1": 0.1, "n2": 0.3, "f1": 0.6, "f2": 0.4}
        got = draw_order(clusters, d)
        assert got == ["f1", "f2", "n2", "n1"]
        assert got[:2] == ["f1", "f2"]  # far cluster painted first

    def test_single_image(self):
        assert draw_order([RetrievedCluster(0, 0.1, ["only"])], {"only": 0.1}) == ["only"]

    def test_matches_sort_oracle(self):
        rng = np.random.default_rng(21)
        for _ in range(100):
            n_clusters = int(rng.integers(1, 6))
            clusters, distances = [], {}
            next_id = 0
            for c in range(n_clusters):
                ids = []
                for _ in range(int(rng.integers(1, 8))):
                    image_id = f"im{next_id:03d}"
                    next_id += 1
                    distances[image_id] = float(rng.random())
                    ids.append(image_id)
                clusters.append(
                    RetrievedCluster(node=c, distance=float(rng.random()), image_ids=ids)
                )
            got = draw_order(clusters, distances)
            assert got == order_oracle(clusters, distances)
            assert sorted(got) == sorted(distances)  # permutation


class TestQuery:
    def test_self_query_is_top_and_last(self, fixture_index):
        index = fixture_index["index"]
        path = fixture_index["corpus"]["images_dir"] / "warm03.png"
        result = query(path.read_bytes(), index)
        assert result.bmu_node == index.classification.assignments["warm03"]
        assert result.image_distances["warm03"] == pytest.approx(0.0, abs=1e-9)
        assert result.draw_order[-1] == "warm03"

    def test_radius_zero_is_bmu_cluster_only(self, fixture_index):
        index = fixture_index["index"]
        path = fixture_index["corpus"]["images_dir"] / "cool05.png"
        result = query(path.read_bytes(), index, QueryConfig(neighborhood_radius=0))
        assert [c.node for c in result.clusters] == [result.bmu_node]
        assert sorted(result.clusters[0].image_ids) == sorted(
            index.classification.members(result.bmu_node)
        )

    def test_monotone_radius(self, fixture_index):
        index = fixture_index["index"]
        path = fixture_index["corpus"]["images_dir"] / "stripe07.png"
        prev = set()
        for r in range(4):
            result = query(
                path.read_bytes(), index, QueryConfig(neighborhood_radius=r, max_images=10_000)
            )
            got = set(result.image_distances)
            assert prev <= got
            prev = got

    def test_truncation_keeps_nearest(self, fixture_index):
        index = fixture_index["index"]
        path = fixture_index["corpus"]["images_dir"] / "warm00.png"
        full = query(path.read_bytes(), index, QueryConfig(neighborhood_radius=3, max_images=10_000))
        cut = query(path.read_bytes(), index, QueryConfig(neighborhood_radius=3, max_images=5))
        want = sorted(full.image_distances.items(), key=lambda kv: (kv[1], kv[0]))[:5]
        assert dict(want) == cut.image_distances

    def test_draw_order_is_permutation_of_retrieved(self, fixture_index):
        index = fixture_index["index"]
        path = fixture_index["corpus"]["images_dir"] / "cool11.png"
        result = query(path.read_bytes(), index)
        assert sorted(result.draw_order) == sorted(result.image_distances)
        assert sorted(result.geo_tree.leaves()) == sorted(result.image_distances)

    def test_idempotent(self, fixture_index):
        index = fixture_index["index"]
        data = (fixture_index["corpus"]["images_dir"] / "stripe02.png").read_bytes()
        a = query(data, index)
        b = query(data, index)
        assert a.to_dict() == b.to_dict()

    def test_undecodable(self, fixture_index):
        with pytest.raises(UndecodableImage):
            query(b"nope", fixture_index["index"])

    def test_empty_index(self, fixture_index):
        import dataclasses

        empty = dataclasses.replace(
            fixture_index["index"],
            ids=[],
            feature_matrix=np.empty((0, 576)),
            processed=np.empty((0, fixture_index["index"].processed.shape[1])),
        )
        with pytest.raises(EmptyIndex):
            query(b"anything", empty)
