import math

import numpy as np
import pytest

from conftest import solid, std_image
from geomir.features import (
    FeatureConfig,
    chroma_bin,
    edge_category,
    extract_features,
    raw_histogram,
    sobel,
)
from geomir.imaging import LabImage, srgb_array_to_lab, to_lab
from oracles import feature_hist_ref

CFG = FeatureConfig()


def lab_from_L(L_field):
    L = np.asarray(L_field, dtype=np.float64)
    pix = np.zeros(L.shape + (3,))
    pix[..., 0] = L
    return LabImage(width=L.shape[1], height=L.shape[0], pixels=pix)


class TestSobel:
    def test_constant_field_zero(self):
        grad = sobel(lab_from_L(np.full((20, 30), 57.0)))
        assert not grad.gx.any() and not grad.gy.any()

    def test_vertical_step(self):
        L = np.zeros((20, 30))
        L[:, 15:] = 100.0
        grad = sobel(lab_from_L(L))
        assert np.allclose(np.abs(grad.gx[:, 14]), 400.0)
        assert np.allclose(np.abs(grad.gx[:, 15]), 400.0)
        assert np.allclose(grad.gx[:, :14], 0.0) and np.allclose(grad.gx[:, 16:], 0.0)
        assert np.allclose(grad.gy, 0.0)

    def test_horizontal_step_is_transpose(self):
        L = np.zeros((20, 30))
        L[:, 15:] = 100.0
        v = sobel(lab_from_L(L))
        h = sobel(lab_from_L(L.T))
        assert np.array_equal(v.gx, h.gy.T)
        assert np.array_equal(v.gy, h.gx.T)


class TestEdgeCategory:
    def test_zero_gradient_is_non_edge(self):
        assert edge_category(0.0, 0.0, CFG) == 8

    def test_horizontal_gradient_sector_zero(self):
        assert edge_category(400.0, 0.0, CFG) == 0

    def test_vertical_gradient_sector_four(self):
        assert edge_category(0.0, 400.0, CFG) == 4

    def test_below_threshold(self):
        assert edge_category(10.0, 10.0, CFG) == 8

    def test_orientation_mod_pi(self):
        # opposite gradients describe the same undirected edge; stay off the
        # exact sector boundaries where rounding may flip sides
        for angle in np.linspace(0.0, math.pi, 33)[:-1] + 0.013:
            g = (100.0 * math.cos(angle), 100.0 * math.sin(angle))
            assert edge_category(*g, CFG) == edge_category(-g[0], -g[1], CFG)

    def test_pi_wraps_to_zero(self):
        assert edge_category(-400.0, 0.0, CFG) == 0


class TestChromaBin:
    def test_center(self):
        assert chroma_bin(0.0, 0.0, CFG) == 36

    def test_lower_corner(self):
        assert chroma_bin(-128.0, -128.0, CFG) == 0

    def test_clamped_upper_corner(self):
        assert chroma_bin(200.0, 200.0, CFG) == 63

    def test_exact_upper_edge_in_last_cell(self):
        assert chroma_bin(128.0, 128.0, CFG) == 63


class TestExtractFeatures:
    def test_uniform_white_mass_in_single_cell(self):
        fv = extract_features(std_image(solid(640, 480, (255, 255, 255))), CFG)
        cell = 8 * 64 + 36
        assert fv.values[cell] == pytest.approx(1.0)
        assert fv.values.sum() == pytest.approx(1.0)

    def test_black_white_split(self):
        arr = solid(640, 480, (0, 0, 0))
        arr[:, 320:] = 255
        counts = raw_histogram(to_lab(std_image(arr)), CFG)
        per_cat = counts.reshape(9, 64).sum(axis=1)
        assert counts.sum() == 640 * 480
        assert per_cat[0] > 0 and per_cat[8] > 0
        assert per_cat[0] + per_cat[8] == 640 * 480

    def test_raw_counts_sum_to_pixels(self):
        rng = np.random.default_rng(3)
        arr = rng.integers(0, 256, size=(480, 640, 3), dtype=np.uint8)
        assert raw_histogram(to_lab(std_image(arr)), CFG).sum() == 307200

    def test_matches_naive_oracle_exactly(self):
        rng = np.random.default_rng(99)
        for _ in range(5):
            arr = rng.integers(0, 256, size=(16, 16, 3), dtype=np.uint8)
            lab = LabImage(width=16, height=16, pixels=srgb_array_to_lab(arr))
            assert raw_histogram(lab, CFG).tolist() == feature_hist_ref(arr)

    def test_rotation_permutes_sectors(self):
        rng = np.random.default_rng(5)
        arr = rng.integers(0, 256, size=(64, 64, 3), dtype=np.uint8)
        lab = lambda a: LabImage(width=a.shape[1], height=a.shape[0], pixels=srgb_array_to_lab(a))
        base = raw_histogram(lab(arr), CFG).reshape(9, 64).sum(axis=1)
        rot = raw_histogram(lab(np.rot90(arr).copy()), CFG).reshape(9, 64).sum(axis=1)
        total = base.sum()
        assert abs(base[0] - rot[4]) <= 0.01 * total
        assert abs(base[4] - rot[0]) <= 0.01 * total
        assert abs(base[2] - rot[6]) <= 0.01 * total
        assert abs(base[6] - rot[2]) <= 0.01 * total

    def test_threshold_monotonicity(self):
        rng = np.random.default_rng(8)
        arr = rng.integers(0, 256, size=(32, 32, 3), dtype=np.uint8)
        lab = LabImage(width=32, height=32, pixels=srgb_array_to_lab(arr))
        prev = -1
        for thr in (0.0, 5.0, 20.0, 80.0, 400.0):
            cfg = FeatureConfig(edge_magnitude_threshold=thr)
            non_edge = raw_histogram(lab, cfg).reshape(9, 64)[8].sum()
            assert non_edge >= prev
            prev = non_edge
