import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from splitconv.grid import (
    SAME,
    VALID,
    ConvMode,
    _split,
    concat_patches,
    crop,
    direct_conv2d,
    max_abs_diff,
    pad_zero,
    split_with_halo,
)

from conftest import naive_conv2d

finite = st.floats(-1, 1, allow_nan=False)


def grids(max_side=9):
    return st.tuples(st.integers(1, max_side), st.integers(1, max_side)).flatmap(
        lambda shape: arrays(np.float64, shape, elements=finite)
    )


class TestDirectConv:
    def test_sum_of_ones(self):
        assert direct_conv2d(np.ones((3, 3)), np.ones((3, 3)), VALID).tolist() == [[9.0]]

    def test_delta_kernel_is_identity(self, rng):
        x = rng.uniform(-1, 1, (6, 7))
        delta = np.zeros((3, 3))
        delta[1, 1] = 1
        np.testing.assert_array_equal(direct_conv2d(x, delta, SAME), x)

    def test_scalar_kernel(self):
        out = direct_conv2d([[1, 2], [3, 4]], [[2]], VALID)
        assert out.tolist() == [[2, 4], [6, 8]]

    @pytest.mark.parametrize("same", [True, False])
    @pytest.mark.parametrize("correlate", [True, False])
    @pytest.mark.parametrize("k", [1, 3, 5])
    def test_matches_naive_loops(self, rng, same, correlate, k):
        x = rng.uniform(-1, 1, (7, 6))
        w = rng.uniform(-1, 1, (k, k))
        mode = ConvMode("same" if same else "valid",
                        "correlation" if correlate else "convolution")
        np.testing.assert_allclose(direct_conv2d(x, w, mode),
                                   naive_conv2d(x, w, same, correlate), atol=1e-13)

    def test_even_kernel_valid(self, rng):
        x = rng.uniform(-1, 1, (5, 5))
        w = rng.uniform(-1, 1, (2, 2))
        np.testing.assert_allclose(direct_conv2d(x, w, VALID),
                                   naive_conv2d(x, w, same=False), atol=1e-13)

    def test_convolution_is_flipped_correlation(self, rng):
        x = rng.uniform(-1, 1, (8, 8))
        w = rng.uniform(-1, 1, (3, 3))
        corr = ConvMode("same", "correlation")
        np.testing.assert_array_equal(direct_conv2d(x, w, SAME),
                                      direct_conv2d(x, w[::-1, ::-1], corr))

    @settings(max_examples=50, deadline=None)
    @given(grids(), grids(), finite, finite)
    def test_linearity(self, x, y, a, b):
        if x.shape != y.shape:
            y = np.resize(y, x.shape)
        w = np.linspace(-1, 1, 9).reshape(3, 3)
        lhs = direct_conv2d(a * x + b * y, w, SAME)
        rhs = a * direct_conv2d(x, w, SAME) + b * direct_conv2d(y, w, SAME)
        assert max_abs_diff(lhs, rhs) <= 1e-12

    def test_rejects_even_same(self):
        with pytest.raises(ValueError, match="odd"):
            direct_conv2d(np.ones((4, 4)), np.ones((2, 2)), SAME)

    def test_rejects_oversized_valid(self):
        with pytest.raises(ValueError, match="VALID"):
            direct_conv2d(np.ones((2, 2)), np.ones((3, 3)), VALID)

    def test_rejects_nan(self):
        x = np.ones((3, 3))
        x[1, 1] = np.nan
        with pytest.raises(ValueError, match="NaN"):
            direct_conv2d(x, np.ones((1, 1)), SAME)

    def test_rejects_non_square_kernel(self):
        with pytest.raises(ValueError, match="square"):
            direct_conv2d(np.ones((4, 4)), np.ones((3, 1)), VALID)


def test_pad_examples():
    out = pad_zero([[5]], 1, 1, 1, 1)
    expected = np.zeros((3, 3))
    expected[1, 1] = 5
    np.testing.assert_array_equal(out, expected)

    x = np.arange(6.0).reshape(2, 3)
    np.testing.assert_array_equal(pad_zero(x, 0, 0, 0, 0), x)
    out = pad_zero(x, 0, 1, 2, 0)
    assert out.shape == (3, 5)
    np.testing.assert_array_equal(out[0:2, 2:5], x)
    assert out[2].sum() == 0 and out[:, :2].sum() == 0


def test_pad_rejects_negative():
    with pytest.raises(ValueError):
        pad_zero(np.ones((2, 2)), -1, 0, 0, 0)


def test_crop_examples():
    x = np.arange(16.0).reshape(4, 4)
    assert crop(x, 1, 1, 2, 2).tolist() == [[5, 6], [9, 10]]
    np.testing.assert_array_equal(crop(x, 0, 0, 4, 4), x)
    with pytest.raises(ValueError, match="outside"):
        crop(x, 3, 0, 2, 2)


@settings(max_examples=60, deadline=None)
@given(grids(), st.tuples(*[st.integers(0, 4)] * 4))
def test_pad_crop_round_trip(x, margins):
    a, b, c, d = margins
    np.testing.assert_array_equal(crop(pad_zero(x, a, b, c, d), a, c, *x.shape), x)


class TestSplit:
    def test_four_by_four_halo_one(self):
        x = np.arange(16.0).reshape(4, 4)
        patches = split_with_halo(x, 2, 1)
        assert [(i, j) for i, j, _ in patches] == [(0, 0), (0, 1), (1, 0), (1, 1)]
        assert all(p.shape == (4, 4) for *_, p in patches)
        # by hand against the 6x6 zero-bordered grid
        np.testing.assert_array_equal(
            patches[0][2],
            [[0, 0, 0, 0], [0, 0, 1, 2], [0, 4, 5, 6], [0, 8, 9, 10]],
        )
        np.testing.assert_array_equal(
            patches[3][2],
            [[5, 6, 7, 0], [9, 10, 11, 0], [13, 14, 15, 0], [0, 0, 0, 0]],
        )

    def test_degenerate_single_patch(self, rng):
        x = rng.uniform(-1, 1, (5, 5))
        (i, j, p), = split_with_halo(x, 5, 0)
        assert (i, j) == (0, 0)
        np.testing.assert_array_equal(p, x)

    def test_ceil_tiling(self):
        x = np.arange(1.0, 26.0).reshape(5, 5)
        patches = split_with_halo(x, 4, 0)
        assert len(patches) == 4
        canvas = np.zeros((8, 8))
        for i, j, p in patches:
            assert p.shape == (4, 4)
            canvas[4 * i:4 * i + 4, 4 * j:4 * j + 4] = p
        expected = np.zeros((8, 8))
        expected[:5, :5] = x
        np.testing.assert_array_equal(canvas, expected)

    @settings(max_examples=60, deadline=None)
    @given(grids(12), st.integers(1, 5), st.integers(0, 3))
    def test_halo_consistency(self, x, s, halo):
        padded, _ = _split(x, s, halo, halo)
        for i, j, p in split_with_halo(x, s, halo):
            window = crop(padded, i * s, j * s, s + 2 * halo, s + 2 * halo)
            np.testing.assert_array_equal(p, window)
            # interior is the input tile itself
            inner = p[halo:halo + s, halo:halo + s]
            np.testing.assert_array_equal(inner, padded[halo + i * s:halo + (i + 1) * s,
                                                       halo + j * s:halo + (j + 1) * s])

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4), st.data())
    def test_split_concat_round_trip(self, s, gr, gc, data):
        x = data.draw(arrays(np.float64, (s * gr, s * gc), elements=finite))
        np.testing.assert_array_equal(concat_patches(split_with_halo(x, s, 0), *x.shape), x)


class TestConcat:
    def test_single_patch(self, rng):
        p = rng.uniform(-1, 1, (3, 3))
        np.testing.assert_array_equal(concat_patches([(0, 0, p)], 3, 3), p)

    def test_overflow_is_dropped(self):
        tiles = [(i, j, np.full((2, 2), 10 * i + j)) for i in range(2) for j in range(2)]
        out = concat_patches(tiles, 3, 3)
        np.testing.assert_array_equal(out, [[0, 0, 1], [0, 0, 1], [10, 10, 11]])

    def test_duplicate(self):
        p = np.zeros((2, 2))
        with pytest.raises(ValueError, match="duplicate"):
            concat_patches([(0, 0, p), (0, 0, p)], 2, 4)

    def test_missing(self):
        p = np.zeros((2, 2))
        with pytest.raises(ValueError, match="missing"):
            concat_patches([(0, 0, p)], 2, 4)


def test_max_abs_diff():
    x = np.arange(4.0).reshape(2, 2)
    assert max_abs_diff(x, x) == 0
    assert max_abs_diff([[1]], [[3]]) == 2
    assert max_abs_diff([[0, 1]], [[1, -1]]) == 2
    with pytest.raises(ValueError, match="shape"):
        max_abs_diff([[1]], [[1, 2]])
