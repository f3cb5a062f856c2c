import math

import numpy as np
import pytest

from sartex import (
    Channel,
    FEATURE_NAMES,
    Glcm,
    OffsetSpec,
    QuantSpec,
    Raster,
    Stage,
    TextureFeatureExtractor,
    glcm,
    haralick,
    quantize,
    texture_vector,
)
from sartex.errors import InputError

from oracles import brute_force_glcm


def gamma_raster(values, channel=Channel.VV, timestamp=None):
    return Raster(np.asarray(values), Stage.GAMMA0_DB, channel, timestamp)


def checkerboard(n, lo, hi):
    grid = np.indices((n, n)).sum(axis=0) % 2
    return np.where(grid == 0, lo, hi).astype(np.float64)


class TestQuantize:
    def test_endpoints_two_levels(self):
        r = gamma_raster([[-30.0, 5.0], [5.0, -30.0]])
        q = QuantSpec(levels=2, lo=-30.0, hi=5.0)
        assert quantize(r, q).flatten().tolist() == [0, 1, 1, 0]

    def test_midpoint_rounds_up_at_32_levels(self):
        mid = (-30.0 + 5.0) / 2
        r = gamma_raster([[mid, mid], [mid, mid]])
        q = QuantSpec(levels=32, lo=-30.0, hi=5.0)
        assert np.all(quantize(r, q) == 16)

    def test_clipping(self):
        r = gamma_raster([[-99.0, 99.0], [-30.0, 5.0]])
        q = QuantSpec(levels=32, lo=-30.0, hi=5.0)
        assert quantize(r, q).flatten().tolist() == [0, 31, 0, 31]

    def test_empty_range_rejected(self):
        with pytest.raises(InputError):
            QuantSpec(levels=32, lo=5.0, hi=5.0)

    def test_level_bounds_validated(self):
        with pytest.raises(InputError):
            QuantSpec(levels=1)
        with pytest.raises(InputError):
            QuantSpec(levels=300)

    def test_stage_enforced_by_default(self):
        r = Raster(np.zeros((2, 2)) + 3.0, Stage.DN, Channel.VV)
        with pytest.raises(InputError):
            quantize(r, QuantSpec())
        assert quantize(r, QuantSpec(), allow_any_stage=True).shape == (2, 2)


class TestGlcm:
    def test_2x2_checkerboard_horizontal(self):
        g = glcm(np.array([[0, 1], [1, 0]]), OffsetSpec(1, (0,)), n=2)
        expected = np.array([[0.0, 0.5], [0.5, 0.0]])
        assert np.array_equal(g.p, expected)

    def test_constant_grid(self):
        g = glcm(np.full((5, 5), 3, dtype=np.int64), OffsetSpec(1, (0, 45, 90, 135)), n=8)
        assert g.p[3, 3] == 1.0
        assert g.p.sum() == 1.0

    def test_offset_exceeds_grid(self):
        with pytest.raises(InputError):
            glcm(np.zeros((2, 2), dtype=np.int64), OffsetSpec(5, (0,)), n=2)

    def test_level_out_of_range(self):
        with pytest.raises(InputError):
            glcm(np.array([[0, 4], [1, 0]]), OffsetSpec(1, (0,)), n=4)

    def test_non_integer_grid_rejected(self):
        with pytest.raises(InputError):
            glcm(np.zeros((3, 3)), OffsetSpec(1, (0,)), n=2)

    def test_matches_brute_force_oracle(self):
        rng = np.random.default_rng(23)
        for _ in range(30):
            n = int(rng.integers(2, 17))
            h, w = rng.integers(6, 33, size=2)
            grid = rng.integers(0, n, size=(h, w))
            n_angles = int(rng.integers(1, 5))
            angles = tuple(rng.choice([0, 45, 90, 135], size=n_angles, replace=False))
            spec = OffsetSpec(int(rng.integers(1, 5)), angles)
            ours = glcm(grid, spec, n).p
            ref = brute_force_glcm(grid, spec.offsets(), n)
            assert np.max(np.abs(ours - ref)) <= 1e-12

    def test_sum_and_symmetry_invariants(self):
        rng = np.random.default_rng(29)
        for _ in range(20):
            grid = rng.integers(0, 8, size=(12, 9))
            g = glcm(grid, OffsetSpec(1, (0, 45, 90, 135)), n=8)
            assert abs(g.p.sum() - 1.0) <= 1e-12
            assert np.array_equal(g.p, g.p.T)
            assert np.all(g.p >= 0)


class TestGlcmValidation:
    def test_asymmetric_rejected(self):
        p = np.array([[0.5, 0.5], [0.0, 0.0]])
        with pytest.raises(InputError):
            Glcm(p, 2, OffsetSpec(1, (0,)))

    def test_bad_sum_rejected(self):
        p = np.array([[0.5, 0.0], [0.0, 0.0]])
        with pytest.raises(InputError):
            Glcm(p, 2, OffsetSpec(1, (0,)))


class TestHaralick:
    def test_checkerboard_glcm(self):
        g = Glcm(np.array([[0.0, 0.5], [0.5, 0.0]]), 2, OffsetSpec(1, (0,)))
        f = haralick(g)
        assert abs(f.contrast - 1.0) <= 1e-12
        assert abs(f.dissimilarity - 1.0) <= 1e-12
        assert abs(f.homogeneity - 0.5) <= 1e-12
        assert abs(f.asm - 0.5) <= 1e-12
        assert abs(f.energy - math.sqrt(0.5)) <= 1e-12
        assert abs(f.correlation - (-1.0)) <= 1e-12

    def test_constant_image_glcm(self):
        p = np.zeros((4, 4))
        p[2, 2] = 1.0
        f = haralick(Glcm(p, 4, OffsetSpec(1, (0,))))
        assert f == (0.0, 0.0, 1.0, 1.0, 1.0, 1.0)

    def test_uniform_glcm_n4(self):
        f = haralick(Glcm(np.full((4, 4), 1 / 16), 4, OffsetSpec(1, (0,))))
        assert abs(f.asm - 0.0625) <= 1e-12
        assert abs(f.energy - 0.25) <= 1e-12

    def test_bounds_on_random_glcms(self):
        rng = np.random.default_rng(31)
        for _ in range(50):
            n = int(rng.integers(2, 12))
            grid = rng.integers(0, n, size=(10, 10))
            f = haralick(glcm(grid, OffsetSpec(1, (0, 90)), n))
            assert 0.0 < f.homogeneity <= 1.0
            assert 0.0 < f.asm <= 1.0
            assert 0.0 < f.energy <= 1.0
            assert -1.0 <= f.correlation <= 1.0
            assert f.contrast >= 0.0 and f.dissimilarity >= 0.0
            assert abs(f.energy**2 - f.asm) <= 1e-12


class TestTextureVector:
    def test_both_channels_constant(self):
        vv = gamma_raster(np.full((6, 6), -10.0))
        vh = gamma_raster(np.full((6, 6), -16.0), channel=Channel.VH)
        vec = texture_vector(vv, vh)
        assert np.array_equal(
            vec.as_array(), np.array([0, 0, 1, 1, 1, 1, 0, 0, 1, 1, 1, 1], dtype=float)
        )

    def test_checkerboard_vv_constant_vh(self):
        vv = gamma_raster(checkerboard(6, -30.0, 5.0))
        vh = gamma_raster(np.full((6, 6), -16.0), channel=Channel.VH)
        q = QuantSpec(levels=2, lo=-30.0, hi=5.0)
        vec = texture_vector(vv, vh, q, OffsetSpec(1, (0,)))
        expected_vv = (1.0, 1.0, 0.5, 0.5, math.sqrt(0.5), -1.0)
        assert np.allclose(tuple(vec.vv), expected_vv, atol=1e-12, rtol=0)
        assert vec.vh == (0.0, 0.0, 1.0, 1.0, 1.0, 1.0)

    def test_channel_mismatch(self):
        vv = gamma_raster(np.zeros((4, 4)))
        with pytest.raises(InputError):
            texture_vector(vv, vv)

    def test_dimension_mismatch(self):
        vv = gamma_raster(np.zeros((2, 2)))
        vh = gamma_raster(np.zeros((3, 3)), channel=Channel.VH)
        with pytest.raises(InputError):
            texture_vector(vv, vh)

    def test_timestamp_mismatch(self):
        vv = gamma_raster(np.zeros((4, 4)), timestamp="2020-01-01")
        vh = gamma_raster(np.zeros((4, 4)), channel=Channel.VH, timestamp="2020-01-13")
        with pytest.raises(InputError):
            texture_vector(vv, vh)

    def test_feature_order_matches_names(self):
        assert FEATURE_NAMES[0] == "vv_contrast"
        assert FEATURE_NAMES[5] == "vv_correlation"
        assert FEATURE_NAMES[6] == "vh_contrast"
        assert len(FEATURE_NAMES) == 12

    def test_db_shift_invariance(self):
        # Pixels on a 2^-10 grid keep every sum below exact in float32/64,
        # so shifting data and clip window together must be bit-identical.
        rng = np.random.default_rng(37)
        ticks = rng.integers(-30 * 1024, 5 * 1024 + 1, size=(16, 16))
        base = ticks / 1024.0
        shift = 4.0
        vv = gamma_raster(base)
        vh = gamma_raster(base + 1.0, channel=Channel.VH)
        q = QuantSpec(levels=32, lo=-30.0, hi=5.0)
        q_shift = QuantSpec(levels=32, lo=-30.0 + shift, hi=5.0 + shift)
        vec = texture_vector(vv, vh, q)
        vec_shift = texture_vector(
            gamma_raster(base + shift),
            gamma_raster(base + 1.0 + shift, channel=Channel.VH),
            q_shift,
        )
        assert np.array_equal(vec.as_array(), vec_shift.as_array())


class TestTextureFeatureExtractor:
    def test_transform_shape_and_order(self):
        vv = gamma_raster(checkerboard(6, -30.0, 5.0))
        vh = gamma_raster(np.full((6, 6), -16.0), channel=Channel.VH)
        ext = TextureFeatureExtractor(levels=2, angles=(0,))
        X = ext.fit_transform([(vv, vh), (vv, vh)])
        assert X.shape == (2, 12)
        assert np.array_equal(X[0], X[1])
        direct = texture_vector(vv, vh, QuantSpec(2, -30.0, 5.0), OffsetSpec(1, (0,)))
        assert np.array_equal(X[0], direct.as_array())

    def test_get_params_round_trip(self):
        ext = TextureFeatureExtractor(levels=16)
        params = ext.get_params()
        assert params["levels"] == 16
        ext.set_params(distance=2)
        assert ext.distance == 2
