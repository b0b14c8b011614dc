import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from railedge.edges import extract_edges
from railedge.exceptions import DimensionError, ValidationError
from railedge.grid import correlate
from railedge.edges import LAPLACIAN
from railedge.gt import (GtConfig, prepare_gt, random_rail_trapezoids, rasterize_shape,
                         rasterize_trapezoid, trapezoid_area)
from railedge.metrics import jaggedness

SMALL = GtConfig(source_size=(160, 160), target_size=(40, 40))


def trapezoid(seed, size=(800, 800)):
    return rasterize_shape(random_rail_trapezoids(1, size, rng=seed)[0], size)


class TestPrepareGt:
    def test_all_ones(self):
        label = prepare_gt(np.ones((800, 800)))
        np.testing.assert_array_equal(label.mask_raw, 1.0)
        np.testing.assert_array_equal(label.mask_smoothed, 1.0)
        np.testing.assert_array_equal(label.edge_target, 0.0)
        assert label.mask_raw.shape == (200, 200)

    def test_half_plane(self):
        full = np.zeros((800, 800))
        full[:, :400] = 1.0
        label = prepare_gt(full)
        # The 4x half-pixel sampling never straddles column 400, so the
        # resized step stays sharp; the box filter then spreads it.
        expected_raw = np.zeros((200, 200))
        expected_raw[:, :100] = 1.0
        np.testing.assert_array_equal(label.mask_raw, expected_raw)
        np.testing.assert_array_equal(label.mask_raw[0],
                                      np.array(oracles.bilinear(full[:8].tolist(), 2, 200))[0])
        row = label.mask_smoothed[0]
        np.testing.assert_allclose(row[98:102], [1, 2 / 3, 1 / 3, 0], atol=1e-15)
        fractional = np.nonzero((label.mask_smoothed > 0) & (label.mask_smoothed < 1))[1]
        assert set(fractional) == {99, 100}
        interior = np.r_[0:98, 102:200]
        np.testing.assert_array_equal(label.mask_smoothed[:, interior],
                                      label.mask_raw[:, interior])

    def test_smoothing_disabled(self):
        full = trapezoid(1, (160, 160))
        label = prepare_gt(full, GtConfig((160, 160), (40, 40), smoothing_enabled=False))
        np.testing.assert_array_equal(label.mask_smoothed, label.mask_raw)

    def test_edge_target_source_flag(self):
        full = trapezoid(2, (160, 160))
        smoothed = prepare_gt(full, SMALL)
        raw = prepare_gt(full, GtConfig((160, 160), (40, 40), edge_from_smoothed=False))
        np.testing.assert_array_equal(smoothed.edge_target,
                                      extract_edges(smoothed.mask_smoothed))
        np.testing.assert_array_equal(raw.edge_target, extract_edges(raw.mask_raw))

    def test_operator_recorded(self):
        assert prepare_gt(trapezoid(3, (160, 160)), SMALL, "sobel").operator == "sobel"

    def test_rejects_non_binary(self):
        with pytest.raises(ValidationError):
            prepare_gt(np.full((800, 800), 0.5))

    def test_rejects_wrong_size(self):
        with pytest.raises(DimensionError):
            prepare_gt(np.ones((400, 400)))

    @pytest.mark.parametrize("kwargs", [
        dict(box_size=2), dict(box_size=0), dict(target_size=(900, 900)),
        dict(source_size=(0, 800)), dict(padding="mirror"),
    ])
    def test_config_validation(self, kwargs):
        with pytest.raises(ValidationError):
            GtConfig(**kwargs)

    def test_trapezoid_jaggedness_drops(self):
        label = prepare_gt(trapezoid(4))
        assert jaggedness(label.mask_smoothed) < jaggedness(label.mask_raw)

    def test_deterministic(self):
        a = prepare_gt(trapezoid(5, (160, 160)), SMALL)
        b = prepare_gt(trapezoid(5, (160, 160)), SMALL)
        for name in ("mask_raw", "mask_smoothed", "edge_target"):
            assert getattr(a, name).tobytes() == getattr(b, name).tobytes()


class TestSmoothingProperties:
    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.sampled_from([3, 5]))
    def test_locality_range_and_low_pass(self, seed, m):
        cfg = GtConfig((160, 160), (40, 40), box_size=m)
        label = prepare_gt(trapezoid(seed, (160, 160)), cfg)
        raw, smooth = label.mask_raw, label.mask_smoothed
        assert smooth.min() >= 0.0 and smooth.max() <= 1.0

        r = m // 2
        padded = np.pad(raw, r, mode="edge")
        windows = np.lib.stride_tricks.sliding_window_view(padded, (m, m))
        constant = windows.min(axis=(-2, -1)) == windows.max(axis=(-2, -1))
        assert constant.any()
        assert raw[constant].tobytes() == smooth[constant].tobytes()

        def mean_abs_lap(x):
            return np.abs(correlate(x, LAPLACIAN)).mean()

        assert mean_abs_lap(smooth) <= mean_abs_lap(raw)

    @settings(max_examples=10, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_full_size_jaggedness_decreases(self, seed):
        label = prepare_gt(trapezoid(seed))
        assert jaggedness(label.mask_smoothed) < jaggedness(label.mask_raw)


class TestRasterize:
    def test_rectangle(self):
        mask = rasterize_trapezoid((2, 6), 1, (2, 6), 5, (8, 10))
        expected = np.zeros((8, 10))
        expected[1:5, 2:6] = 1.0
        np.testing.assert_array_equal(mask, expected)

    def test_symmetric_trapezoid_is_mirror_symmetric(self):
        mask = rasterize_trapezoid((45, 55), 10, (20, 80), 90, (100, 100))
        np.testing.assert_array_equal(mask, mask[:, ::-1])

    def test_binary_and_narrowing(self):
        mask = rasterize_trapezoid((45, 55), 10, (20, 80), 90, (100, 100))
        assert set(np.unique(mask)) == {0.0, 1.0}
        widths = mask.sum(axis=1)[10:90]
        assert np.all(np.diff(widths) >= 0)

    @pytest.mark.parametrize("seed", range(5))
    def test_area_close_to_analytic(self, seed):
        shape = random_rail_trapezoids(1, (800, 800), rng=seed)[0]
        mask = rasterize_shape(shape, (800, 800))
        area = trapezoid_area(shape["top"], shape["r_top"], shape["bottom"], shape["r_bottom"])
        assert abs(mask.sum() - area) / area < 0.02

    @pytest.mark.parametrize("args", [
        ((10, 5), 1, (2, 6), 5),      # left right swapped
        ((2, 6), 5, (2, 6), 1),       # rows inverted
        ((2, 6), 1, (2, 16), 5),      # outside grid
        ((-1, 6), 1, (2, 6), 5),
    ])
    def test_validation(self, args):
        with pytest.raises(ValidationError):
            rasterize_trapezoid(*args, (8, 10))

    def test_random_shapes_reproducible_and_valid(self):
        a = random_rail_trapezoids(6, rng=9)
        assert a == random_rail_trapezoids(6, rng=9)
        for s in a:
            assert s["r_top"] < s["r_bottom"] <= 800
            assert s["top"][1] - s["top"][0] < s["bottom"][1] - s["bottom"][0]
            assert rasterize_shape(s, (800, 800)).any()
