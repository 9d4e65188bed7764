import json

import numpy as np
import pytest

from geomir import index_io
from geomir.errors import IndexFormatError
from geomir.retrieval import query


class TestRoundTrip:
    def test_components_survive_reload(self, fixture_index):
        index = fixture_index["index"]
        reloaded = index_io.load_index(fixture_index["dir"])
        assert reloaded.ids == index.ids
        assert np.array_equal(reloaded.feature_matrix, index.feature_matrix)
        assert np.array_equal(reloaded.grid.weights, index.grid.weights)
        assert np.array_equal(reloaded.pipeline.keep_mask, index.pipeline.keep_mask)
        assert reloaded.classification.assignments == index.classification.assignments

    def test_query_answers_preserved(self, fixture_index):
        index = fixture_index["index"]
        reloaded = index_io.load_index(fixture_index["dir"])
        images_dir = fixture_index["corpus"]["images_dir"]
        for path in sorted(images_dir.iterdir())[:20]:
            data = path.read_bytes()
            assert query(data, index).to_dict() == query(data, reloaded).to_dict()


class TestVersionGuard:
    @pytest.mark.parametrize(
        "name,reader",
        [
            (index_io.FEATURES_FILE, index_io.read_features),
            (index_io.PIPELINE_FILE, index_io.read_pipeline),
            (index_io.SOM_FILE, index_io.read_som),
            (index_io.CLASSIFICATION_FILE, index_io.read_classification),
        ],
    )
    def test_wrong_version_rejected(self, fixture_index, tmp_path, name, reader):
        doc = json.loads((fixture_index["dir"] / name).read_text())
        doc["format_version"] = 99
        bad = tmp_path / name
        bad.write_text(json.dumps(doc))
        with pytest.raises(IndexFormatError, match="format_version"):
            reader(bad)

    def test_wrong_kind_rejected(self, fixture_index, tmp_path):
        bad = tmp_path / index_io.SOM_FILE
        bad.write_bytes((fixture_index["dir"] / index_io.PIPELINE_FILE).read_bytes())
        with pytest.raises(IndexFormatError, match="kind"):
            index_io.read_som(bad)

    def test_garbage_is_named_error_not_crash(self, tmp_path):
        bad = tmp_path / "pipeline.json"
        bad.write_text("{{{{")
        with pytest.raises(IndexFormatError):
            index_io.read_pipeline(bad)

    def test_missing_component(self, fixture_index, tmp_path):
        partial = tmp_path / "idx"
        partial.mkdir()
        for name in (index_io.FEATURES_FILE, index_io.PIPELINE_FILE):
            (partial / name).write_bytes((fixture_index["dir"] / name).read_bytes())
        with pytest.raises(IndexFormatError, match="missing"):
            index_io.load_index(partial)
