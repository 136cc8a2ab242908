"""
Unit tests for the convolution-to-matrix bridge and channel pruning.
"""

import numpy as np
import pytest
from scipy.signal import correlate2d

from src.spectraprune.conv import (
    channel_scores,
    conv_as_matmul,
    conv_direct,
    fold_kernel,
    im2col,
    output_size,
    prune_channels,
    unfold_kernel,
)
from src.spectraprune.errors import ParameterError, ShapeMismatchError


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


class TestUnfold:
    """Test kernel unfolding and folding."""

    def test_unfold_layout(self, rng):
        """Test column o of A is kernel o flattened in (c, row, col) order."""
        t = rng.standard_normal((4, 3, 2, 2))
        a = unfold_kernel(t)
        assert a.shape == (12, 4)
        for o in range(4):
            assert np.array_equal(a[:, o], t[o].ravel())

    def test_fold_inverts_unfold(self, rng):
        """Test folding an unfolded kernel gives it back exactly."""
        t = rng.standard_normal((5, 2, 3, 3))
        assert np.array_equal(fold_kernel(unfold_kernel(t), 5, 2, 3, 3), t)

    def test_spectrum_independent_of_flatten_order(self, rng):
        """Test flattening each filter in (row, col, c) order keeps the singular values."""
        t = rng.standard_normal((6, 3, 3, 3))
        alternative = t.transpose(0, 2, 3, 1).reshape(6, -1).T
        np.testing.assert_allclose(
            np.linalg.svd(alternative, compute_uv=False),
            np.linalg.svd(unfold_kernel(t), compute_uv=False),
            rtol=0,
            atol=1e-10,
        )

    def test_fold_wrong_shape(self):
        """Test folding a matrix of the wrong shape is rejected."""
        with pytest.raises(ShapeMismatchError):
            fold_kernel(np.ones((4, 4)), 2, 2, 2, 2)


class TestConvolution:
    """Test direct and lowered convolution."""

    def test_output_size(self):
        """Test the strided, padded output size."""
        assert output_size(8, 8, 3, 3, 1, 0) == (6, 6)
        assert output_size(8, 7, 3, 3, 2, 1) == (4, 4)

    def test_output_size_rejects_bad_arguments(self):
        """Test invalid stride or pad and oversized kernels."""
        with pytest.raises(ParameterError):
            output_size(8, 8, 3, 3, 0, 0)
        with pytest.raises(ParameterError):
            output_size(8, 8, 3, 3, 1, -1)
        with pytest.raises(ShapeMismatchError):
            output_size(2, 2, 3, 3, 1, 0)

    def test_im2col_shape(self, rng):
        """Test Z has one row per kernel weight and one column per position."""
        z = im2col(rng.standard_normal((3, 8, 8)), 3, 3, stride=2, pad=1)
        assert z.shape == (27, 16)

    def test_identity_kernel(self, rng):
        """Test a 1x1 identity kernel reproduces the signal in both forms."""
        x = rng.standard_normal((3, 5, 5))
        t = np.eye(3).reshape(3, 3, 1, 1)
        assert np.array_equal(conv_direct(x, t), x)
        assert np.max(np.abs(conv_as_matmul(x, t) - x)) == 0.0

    def test_direct_matches_scipy(self, rng):
        """Test conv_direct is the valid cross-correlation summed over channels."""
        x = rng.standard_normal((2, 7, 6))
        t = rng.standard_normal((3, 2, 3, 2))
        expected = np.stack(
            [
                sum(correlate2d(x[c], t[o, c], mode="valid") for c in range(2))
                for o in range(3)
            ]
        )
        np.testing.assert_allclose(conv_direct(x, t), expected, atol=1e-12)

    def test_lowered_matches_direct(self, rng):
        """Test random C=3, O=4, 3x3, 8x8 agree within 1e-10 with stride and pad."""
        x = rng.standard_normal((3, 8, 8))
        t = rng.standard_normal((4, 3, 3, 3))
        for stride, pad in [(1, 0), (2, 1), (1, 2)]:
            direct = conv_direct(x, t, stride, pad)
            lowered = conv_as_matmul(x, t, stride, pad)
            assert direct.shape == lowered.shape
            assert np.max(np.abs(direct - lowered)) <= 1e-10

    def test_channel_mismatch(self, rng):
        """Test incompatible channel counts name both shapes."""
        with pytest.raises(ShapeMismatchError) as exc:
            conv_direct(rng.standard_normal((2, 5, 5)), rng.standard_normal((4, 3, 3, 3)))
        assert "(4, 3, 3, 3)" in str(exc.value)
        assert "(2, 5, 5)" in str(exc.value)


class TestChannelPruning:
    """Test channel scoring and removal."""

    def test_scores_sorted_with_index_ties(self):
        """Test ascending L1 mass, equal masses ordered by channel index."""
        t = np.ones((4, 1, 1, 2))
        t[1] *= 3.0
        t[3] *= 0.5
        scores = channel_scores(t)
        assert [s.channel_index for s in scores] == [3, 0, 2, 1]
        assert scores[0].l1_mass == 1.0
        assert scores[0].l2_mass == pytest.approx(np.sqrt(0.5))

    def test_remove_zero_is_identity(self, rng):
        """Test removing no channels leaves the kernel unchanged."""
        t = rng.standard_normal((3, 2, 3, 3))
        pruned, removed = prune_channels(t, 0)
        assert removed == []
        assert np.array_equal(pruned, t)

    def test_zero_channel_removed_first(self, rng):
        """Test an all-zero channel ranks first."""
        t = rng.standard_normal((5, 2, 3, 3))
        t[2] = 0.0
        pruned, removed = prune_channels(t, 2)
        assert removed[0] == 2
        assert pruned.shape == t.shape
        assert np.all(pruned[removed] == 0.0)
        kept = [o for o in range(5) if o not in removed]
        assert np.array_equal(pruned[kept], t[kept])

    @pytest.mark.parametrize("n_remove", [-1, 3])
    def test_remove_count_out_of_range(self, n_remove):
        """Test N must satisfy 0 <= N < O."""
        with pytest.raises(ParameterError):
            prune_channels(np.ones((3, 1, 2, 2)), n_remove)
