"""
Unit tests for spectrum summaries, sweeps, trajectories and channel sweeps.
"""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.spectraprune.analysis import (
    channel_sweep,
    compare_spectra,
    removal_effects,
    sparsity_sweep,
    spectrum_summary,
    sweep_configs,
    trajectory_report,
)
from src.spectraprune.conv import unfold_kernel
from src.spectraprune.errors import ParameterError, ShapeMismatchError
from src.spectraprune.linalg import frobenius_norm, svd_full
from src.spectraprune.models.parameters.sparsify_params import (
    SparsifyConfig,
    SparsifyMethod,
)
from src.spectraprune.models.reports import SpectrumSummary


class TestSpectrumSummary:
    """Test single-matrix summaries."""

    def test_diagonal(self):
        """Test diag(3, 1) summary values."""
        summary = spectrum_summary(np.diag([3.0, 1.0]), 2)
        assert summary.top_singular_values == pytest.approx([3.0, 1.0])
        assert summary.two_norm == pytest.approx(3.0, abs=1e-6)
        assert summary.f_norm == pytest.approx(math.sqrt(10.0))
        assert summary.nnz == 2

    def test_top_k_clipped_to_min_dimension(self):
        """Test asking for more values than exist returns min(m, n) values."""
        summary = spectrum_summary(np.ones((2, 5)), 10)
        assert len(summary.top_singular_values) == 2

    def test_truncated_path_above_cutoff(self, clean_env):
        """Test matrices above the full-SVD cutoff use the truncated SVD."""
        rng = np.random.default_rng(1)
        left, _ = np.linalg.qr(rng.standard_normal((30, 20)))
        right, _ = np.linalg.qr(rng.standard_normal((20, 20)))
        sigma = np.concatenate([[10.0, 8.0, 6.0], np.full(17, 0.01)])
        a = (left * sigma) @ right.T
        clean_env.setenv("SPECTRAPRUNE_FULL_SVD_CUTOFF", "4")
        summary = spectrum_summary(a, 3)
        np.testing.assert_allclose(summary.top_singular_values, [10.0, 8.0, 6.0], rtol=1e-6)

    def test_two_norm_is_first_singular_value(self, clean_env):
        """Test two_norm equals the leading singular value on random matrices."""
        rng = np.random.default_rng(11)
        for _ in range(200):
            rows, cols = (int(n) for n in rng.integers(2, 41, size=2))
            a = rng.standard_normal((rows, cols))
            summary = spectrum_summary(a, 3)
            sigma = svd_full(a).sigma
            assert summary.two_norm == pytest.approx(sigma[0], rel=1e-8)
            assert summary.two_norm == summary.top_singular_values[0]

    def test_inconsistent_two_norm_rejected(self):
        """Test a summary whose two_norm disagrees with its first value is invalid."""
        with pytest.raises(ValidationError):
            SpectrumSummary(
                shape=(2, 2), top_singular_values=[3.0, 1.0], two_norm=2.9, f_norm=3.2, nnz=2
            )

    def test_top_k_must_be_positive(self):
        """Test top_k < 1 is rejected."""
        with pytest.raises(ParameterError):
            spectrum_summary(np.eye(2), 0)


class TestCompareSpectra:
    """Test paired spectra."""

    def test_self_comparison(self):
        """Test comparing a matrix with itself gives zero errors."""
        a = np.random.default_rng(3).standard_normal((6, 4))
        delta = compare_spectra(a, a, 3)
        assert delta.err_two_norm == 0.0
        assert delta.err_f_norm == 0.0
        assert delta.max_abs_delta == 0.0
        assert delta.top_k_relative_error == 0.0

    def test_deltas(self):
        """Test absolute deltas of paired values."""
        delta = compare_spectra(np.diag([3.0, 1.0]), np.diag([2.0, 1.0]), 2)
        assert delta.abs_deltas == pytest.approx([1.0, 0.0])
        assert delta.err_f_norm == pytest.approx(1.0)

    def test_weyl_bound_on_random_pairs(self):
        """Test every paired delta is bounded by the 2-norm of the difference."""
        rng = np.random.default_rng(12)
        for _ in range(100):
            rows, cols = (int(n) for n in rng.integers(1, 10, size=2))
            a = rng.standard_normal((rows, cols))
            a_tilde = a + rng.uniform(0.0, 1.0) * rng.standard_normal((rows, cols))
            delta = compare_spectra(a, a_tilde, min(rows, cols))
            bound = svd_full(a - a_tilde).sigma[0]
            assert delta.max_abs_delta <= bound + 1e-8
            assert delta.max_abs_delta == max(delta.abs_deltas)

    def test_shape_mismatch(self):
        """Test different shapes are rejected."""
        with pytest.raises(ShapeMismatchError):
            compare_spectra(np.eye(2), np.eye(3), 1)


class TestTrajectory:
    """Test norm trajectories."""

    def test_norms_and_deltas(self):
        """Test per-snapshot norms and consecutive changes."""
        trajectory = trajectory_report(
            [("e0", np.eye(2)), ("e1", 2 * np.eye(2)), ("e2", np.diag([3.0, 0.0]))]
        )
        assert trajectory.labels == ["e0", "e1", "e2"]
        assert trajectory.two_norms == pytest.approx([1.0, 2.0, 3.0], abs=1e-9)
        assert trajectory.f_norms == pytest.approx([math.sqrt(2), math.sqrt(8), 3.0])
        assert trajectory.two_norm_deltas == pytest.approx([1.0, 1.0], abs=1e-9)

    def test_convergent_sequence(self):
        """Test A_t = A + 0.5^t N gives norm changes that halve each step."""
        rng = np.random.default_rng(13)
        left, _ = np.linalg.qr(rng.standard_normal((6, 4)))
        right, _ = np.linalg.qr(rng.standard_normal((4, 4)))
        limit = (left * [10.0, 4.0, 2.0, 1.0]) @ right.T
        noise = limit + 0.1 * rng.standard_normal((6, 4))
        trajectory = trajectory_report(
            [(f"t{t}", limit + 0.5**t * noise) for t in range(2, 12)]
        )
        for deltas in (trajectory.two_norm_deltas, trajectory.f_norm_deltas):
            steps = np.abs(deltas)
            np.testing.assert_allclose(steps[1:] / steps[:-1], 0.5, atol=0.02)

    def test_inconsistent_shape_names_label(self):
        """Test a snapshot with a different shape is reported by label."""
        with pytest.raises(ShapeMismatchError) as exc:
            trajectory_report([("a", np.eye(2)), ("late", np.eye(3))])
        assert "'late'" in str(exc.value)

    def test_empty(self):
        """Test at least one snapshot is required."""
        with pytest.raises(ParameterError):
            trajectory_report([])


class TestSweeps:
    """Test sweep expansion and evaluation."""

    def test_rank_grid_is_cartesian(self):
        """Test q x rank grids expand row-major."""
        configs = sweep_configs("lowrank", [0.1, 0.3, 0.5], ranks=[1, 5, 10], seed=4)
        assert len(configs) == 9
        assert [(c.q, c.rank_k) for c in configs[:3]] == [(0.1, 1), (0.1, 5), (0.1, 10)]
        assert all(c.seed == 4 for c in configs)

    def test_fixed_parameters_carry_over(self):
        """Test the fixed configuration supplies c and rank."""
        fixed = SparsifyConfig(method="lowrank", c=0.2, rank_k=3)
        configs = sweep_configs(SparsifyMethod.LOWRANK, [0.4], fixed)
        assert configs[0].c == 0.2 and configs[0].rank_k == 3 and configs[0].q == 0.4

    def test_rank_grid_only_for_lowrank(self):
        """Test rank grids are refused for the other methods."""
        with pytest.raises(ParameterError):
            sweep_configs("bernoulli", [0.3], ranks=[2])
        with pytest.raises(ParameterError):
            sweep_configs("threshold", [0.3], ranks=[2])

    def test_empty_grid(self):
        """Test an empty grid is rejected."""
        with pytest.raises(ParameterError):
            sweep_configs("threshold", [])

    def test_threshold_error_grows_with_sparsity(self):
        """Test err_f_norm is non-decreasing as fewer entries are kept."""
        a = np.random.default_rng(9).standard_normal((12, 12))
        rows = sparsity_sweep(a, "threshold", [0.20, 0.15, 0.10, 0.05, 0.02, 0.01])
        assert len(rows) == 6
        errors = [row.err_f_norm for row in rows]
        assert all(b >= a for a, b in zip(errors, errors[1:]))

    def test_keep_everything_row(self):
        """Test keep fraction 1.0 gives a single zero-error row."""
        rows = sparsity_sweep(np.eye(4), "threshold", [1.0])
        assert len(rows) == 1
        assert rows[0].err_f_norm == 0.0 and rows[0].achieved_sparsity == 0.0

    def test_thread_count_does_not_change_rows(self, clean_env):
        """Test serial and parallel evaluation give identical rows."""
        a = np.random.default_rng(10).standard_normal((20, 16))
        clean_env.setenv("SPECTRAPRUNE_THREADS", "1")
        serial = sparsity_sweep(a, "lowrank", [0.2, 0.4], seed=3, ranks=[2, 4])
        clean_env.setenv("SPECTRAPRUNE_THREADS", "4")
        parallel = sparsity_sweep(a, "lowrank", [0.2, 0.4], seed=3, ranks=[2, 4])
        assert serial == parallel


class TestChannelSweep:
    """Test single-channel removal rows."""

    def test_norm_identity(self):
        """Test ||A~||_F^2 + l2^2 = ||A||_F^2 for every channel."""
        t = np.random.default_rng(6).standard_normal((6, 3, 3, 3))
        total = frobenius_norm(unfold_kernel(t)) ** 2
        rows = channel_sweep(t)
        assert [row.channel_index for row in rows] == list(range(6))
        for row in rows:
            assert row.tilde_f_norm**2 + row.l2_mass**2 == pytest.approx(total, abs=1e-10)

    def test_needs_two_channels(self):
        """Test single-channel kernels are rejected."""
        with pytest.raises(ParameterError):
            channel_sweep(np.ones((1, 1, 2, 2)))

    def test_removal_effects_single_channel(self):
        """Test removal rows exist for one output channel and match channel_sweep otherwise."""
        rows = removal_effects(np.ones((1, 1, 2, 2)))
        assert [(r.channel_index, r.l1_mass, r.tilde_f_norm) for r in rows] == [(0, 4.0, 0.0)]
        kernel = np.random.default_rng(14).standard_normal((3, 2, 2, 2))
        assert removal_effects(kernel) == channel_sweep(kernel)
