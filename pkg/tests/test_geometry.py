import random

import pytest

from unirec.geometry import FEATURE_DIM, fit_geometry


def test_large_page_hits_native_caps():
    spec = fit_geometry(2816, 1920)
    assert spec.scaled_hw == (1408, 960)
    assert spec.padded_hw == (1408, 960)
    assert spec.grid_hw == (44, 30)
    assert spec.n_tokens == 1320


def test_unit_grid():
    spec = fit_geometry(32, 32)
    assert spec.scaled_hw == (32, 32)
    assert spec.padded_hw == (32, 32)
    assert spec.n_tokens == 1


def test_pad_up_to_32():
    spec = fit_geometry(33, 33)
    assert spec.padded_hw == (64, 64)
    assert spec.n_tokens == 4


def test_feature_dim_constant():
    assert fit_geometry(100, 100).feature_dim == FEATURE_DIM == 768


def test_invalid_dimensions():
    with pytest.raises(ValueError):
        fit_geometry(0, 10)


def test_downscale_only_and_grid_arithmetic():
    rng = random.Random(99)
    for _ in range(10_000):
        h = rng.randint(1, 6000)
        w = rng.randint(1, 6000)
        spec = fit_geometry(h, w)
        assert spec.scaled_hw[0] <= max(h, 1)
        assert spec.scaled_hw[1] <= max(w, 1)
        assert spec.padded_hw[1] <= 960
        assert spec.padded_hw[0] <= 1408
        assert spec.padded_hw[0] % 32 == 0 and spec.padded_hw[1] % 32 == 0
        assert spec.n_tokens == (spec.padded_hw[0] // 32) * (
            spec.padded_hw[1] // 32
        )


def test_aspect_ratio_preserved_within_rounding():
    for h, w in [(1000, 3000), (5000, 700), (1408, 960), (17, 4099)]:
        spec = fit_geometry(h, w)
        sh, sw = spec.scaled_hw
        scale = min(960 / w, 1408 / h, 1.0)
        assert abs(sh - scale * h) <= 0.5
        assert abs(sw - scale * w) <= 0.5
