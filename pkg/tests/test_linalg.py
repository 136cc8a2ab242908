"""
Unit tests for the dense linear algebra core.
"""

import logging
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from src.spectraprune.errors import ParameterError, ShapeMismatchError
from src.spectraprune.linalg import (
    as_matrix,
    frobenius_norm,
    low_rank_reconstruct,
    matmul,
    orthonormality_error,
    power_iteration,
    spectral_norm,
    svd_full,
    svd_truncated,
)

small_matrices = arrays(
    np.float64,
    st.tuples(st.integers(1, 8), st.integers(1, 8)),
    elements=st.floats(-10, 10, allow_nan=False, allow_infinity=False),
)


class TestAsMatrix:
    """Test validation of matrix inputs."""

    def test_returns_read_only_float64_copy(self):
        """Test that the input is copied, widened and frozen."""
        source = np.array([[1, 2], [3, 4]], dtype=np.int32)
        a = as_matrix(source)
        assert a.dtype == np.float64
        assert not a.flags.writeable
        source[0, 0] = 99
        assert a[0, 0] == 1.0

    @pytest.mark.parametrize(
        "data",
        [[1.0, 2.0], [[np.nan, 1.0]], [[np.inf]], np.zeros((0, 3))],
    )
    def test_rejects_invalid_input(self, data):
        """Test 1-D, non-finite and empty inputs are rejected."""
        with pytest.raises(ParameterError):
            as_matrix(data)


class TestSvdFull:
    """Test the full thin SVD."""

    def test_identity(self):
        """Test the identity has unit singular values."""
        np.testing.assert_allclose(svd_full(np.eye(2)).sigma, [1.0, 1.0])

    def test_diagonal(self):
        """Test a diagonal matrix yields its diagonal."""
        np.testing.assert_allclose(svd_full(np.diag([3.0, 1.0])).sigma, [3.0, 1.0])

    def test_orthonormality_post_check_logged(self, caplog):
        """Test both SVDs log the orthonormality of their factors."""
        a = np.random.default_rng(8).standard_normal((7, 5))
        with caplog.at_level(logging.DEBUG, logger="src.spectraprune.linalg"):
            svd_full(a)
            svd_truncated(a, 2)
        messages = [r.getMessage() for r in caplog.records]
        assert any("7x5: orthonormality error" in m for m in messages)
        assert not any(r.levelno >= logging.WARNING for r in caplog.records)

    def test_rank_deficient(self):
        """Test [[0, 2], [0, 0]] has singular values 2 and 0."""
        np.testing.assert_allclose(
            svd_full([[0.0, 2.0], [0.0, 0.0]]).sigma, [2.0, 0.0], atol=1e-15
        )

    def test_rank_is_min_dimension(self):
        """Test r = min(rows, cols) for a wide matrix."""
        factors = svd_full(np.ones((3, 7)))
        assert factors.rank == 3
        assert factors.U.shape == (3, 3)
        assert factors.V.shape == (7, 3)

    @settings(max_examples=60, deadline=None)
    @given(small_matrices)
    def test_factor_invariants(self, a):
        """Test ordering, orthonormality and reconstruction on arbitrary input."""
        f = svd_full(a)
        assert np.all(f.sigma >= 0)
        assert np.all(np.diff(f.sigma) <= 0)
        assert orthonormality_error(f.U) <= 1e-8
        assert orthonormality_error(f.V) <= 1e-8
        rebuilt = (f.U * f.sigma) @ f.V.T
        scale = max(np.linalg.norm(a), 1.0)
        assert np.linalg.norm(rebuilt - a) <= 1e-8 * scale

    def test_deterministic(self):
        """Test repeated calls give identical factors."""
        a = np.random.default_rng(3).standard_normal((6, 4))
        first, second = svd_full(a), svd_full(a)
        assert np.array_equal(first.sigma, second.sigma)
        assert np.array_equal(first.U, second.U)


class TestSvdTruncated:
    """Test the randomized truncated SVD."""

    def test_rank_one(self):
        """Test a rank-1 u v^T with |u| = 2, |v| = 1 gives sigma [2]."""
        u = np.array([2.0, 0.0, 0.0])
        v = np.array([0.6, 0.8])
        factors = svd_truncated(np.outer(u, v), 1, seed=0)
        np.testing.assert_allclose(factors.sigma, [2.0], rtol=1e-12)

    def test_diagonal(self):
        """Test diag(5, 3, 1) with k=2 gives [5, 3]."""
        factors = svd_truncated(np.diag([5.0, 3.0, 1.0]), 2, seed=0)
        np.testing.assert_allclose(factors.sigma, [5.0, 3.0], rtol=1e-12)
        assert factors.rank_requested == 2

    def test_matches_full_svd(self):
        """Test a random 20x10 matrix agrees with svd_full on the top 5 values."""
        a = np.random.default_rng(42).standard_normal((20, 10))
        truncated = svd_truncated(a, 5, seed=42)
        np.testing.assert_allclose(truncated.sigma, svd_full(a).sigma[:5], rtol=1e-6)
        assert orthonormality_error(truncated.U) <= 1e-8
        assert orthonormality_error(truncated.V) <= 1e-8

    def test_bit_reproducible(self):
        """Test the same seed reproduces the factors exactly."""
        a = np.random.default_rng(1).standard_normal((40, 30))
        first = svd_truncated(a, 3, seed=9)
        second = svd_truncated(a, 3, seed=9)
        assert np.array_equal(first.sigma, second.sigma)
        assert np.array_equal(first.U, second.U)
        assert np.array_equal(first.V, second.V)

    @pytest.mark.parametrize("k", [0, 4])
    def test_k_out_of_range(self, k):
        """Test k outside [1, min(m, n)] is rejected."""
        with pytest.raises(ParameterError):
            svd_truncated(np.ones((3, 5)), k)


class TestPowerIteration:
    """Test the power-iteration spectral norm."""

    def test_zero_matrix(self):
        """Test the zero matrix has norm 0."""
        assert spectral_norm(np.zeros((3, 4))) == 0.0

    def test_diagonal(self):
        """Test diag(3, 1) has norm 3."""
        assert spectral_norm(np.diag([3.0, 1.0])) == pytest.approx(3.0, abs=1e-6)

    def test_matches_full_svd(self):
        """Test a seeded random 8x8 agrees with sigma_1 from svd_full."""
        a = np.random.default_rng(7).standard_normal((8, 8))
        expected = svd_full(a).sigma[0]
        assert spectral_norm(a) == pytest.approx(expected, rel=1e-6)

    def test_start_vector_in_null_space(self):
        """Test a matrix that annihilates the all-ones start vector."""
        result = power_iteration([[1.0, -1.0]])
        assert result.converged
        assert result.value == pytest.approx(math.sqrt(2.0), rel=1e-12)

    def test_iteration_cap_flags_non_convergence(self, caplog):
        """Test hitting max_iter returns the estimate flagged non-converged."""
        a = np.random.default_rng(5).standard_normal((6, 6))
        with caplog.at_level(logging.WARNING):
            result = power_iteration(a, max_iter=1)
        assert not result.converged
        assert result.iterations == 1
        assert 0 < result.value <= frobenius_norm(a) + 1e-10
        assert "max_iter" in caplog.text

    def test_invalid_tolerance(self):
        """Test tol must be positive."""
        with pytest.raises(ParameterError):
            power_iteration(np.eye(2), tol=0.0)


class TestNorms:
    """Test Frobenius norm, reconstruction and products."""

    def test_three_four_five(self):
        """Test [[3, 4]] has Frobenius norm 5."""
        assert frobenius_norm([[3.0, 4.0]]) == 5.0

    def test_identity(self):
        """Test the n x n identity has Frobenius norm sqrt(n)."""
        assert frobenius_norm(np.eye(5)) == pytest.approx(math.sqrt(5.0))

    @settings(max_examples=60, deadline=None)
    @given(small_matrices)
    def test_frobenius_dominates_spectral(self, a):
        """Test ||A||_F >= ||A||_2 and ||A||_F = sqrt(sum sigma^2)."""
        f_norm = frobenius_norm(a)
        assert spectral_norm(a) <= f_norm + 1e-10 * max(f_norm, 1.0)
        sigma = svd_full(a).sigma
        assert f_norm == pytest.approx(math.sqrt(float(np.sum(sigma**2))), rel=1e-8, abs=1e-12)

    def test_low_rank_reconstruct(self):
        """Test the full-rank reconstruction reproduces the input."""
        a = np.random.default_rng(2).standard_normal((5, 3))
        factors = svd_full(a)
        np.testing.assert_allclose(low_rank_reconstruct(factors, 3), a, atol=1e-12)
        rank_one = low_rank_reconstruct(factors, 1)
        assert np.linalg.matrix_rank(rank_one) == 1
        with pytest.raises(ParameterError):
            low_rank_reconstruct(factors, 4)

    def test_eckart_young_residual(self):
        """Test the rank-2 residual of a random 6x4 matrix is the tail of its spectrum."""
        a = np.random.default_rng(6).standard_normal((6, 4))
        factors = svd_full(a)
        residual = frobenius_norm(a - low_rank_reconstruct(factors, 2)) ** 2
        assert residual == pytest.approx(float(np.sum(factors.sigma[2:] ** 2)), rel=1e-8)

    def test_matmul_shape_mismatch(self):
        """Test mismatched inner dimensions name both shapes."""
        with pytest.raises(ShapeMismatchError) as exc:
            matmul(np.ones((2, 3)), np.ones((2, 3)))
        assert "(2, 3) vs (2, 3)" in str(exc.value)

    def test_matmul(self):
        """Test the product of compatible matrices."""
        product = matmul([[1.0, 2.0]], [[3.0], [4.0]])
        assert product.shape == (1, 1)
        assert product[0, 0] == 11.0
