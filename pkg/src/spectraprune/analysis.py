# spectraprune - Spectrum-preserving sparsification of neural network weights
# Copyright (C) 2025 cabout.me
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU Affero General Public License as published
# by the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Affero General Public License for more details.
#
# You should have received a copy of the GNU Affero General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.

"""
Spectrum reporting: summaries, pruned-vs-original comparisons, norm
trajectories over training snapshots, sparsity sweeps and channel sweeps.
"""

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .config import get_settings
from .conv import as_kernel, channel_scores, unfold_kernel
from .errors import ParameterError, ShapeMismatchError
from .linalg import as_matrix, frobenius_norm, spectral_norm, svd_full, svd_truncated
from .models.parameters.sparsify_params import SparsifyConfig, SparsifyMethod
from .models.reports import (
    ChannelSweepRow,
    NormTrajectory,
    SpectrumDelta,
    SpectrumSummary,
    SweepRow,
)
from .sparsify import sparsification_error, sparsify

logger = logging.getLogger(__name__)


def _leading_singular_values(a: np.ndarray, top_k: int, seed: int = 0) -> List[float]:
    k = min(top_k, min(a.shape))
    if min(a.shape) <= get_settings().full_svd_cutoff:
        return [float(s) for s in svd_full(a).sigma[:k]]
    logger.debug(f"Using truncated SVD for a {a.shape} matrix")
    return [float(s) for s in svd_truncated(a, k, seed).sigma]


def spectrum_summary(a, top_k: int) -> SpectrumSummary:
    """
    Leading singular values, spectral and Frobenius norms and nnz of a.

    two_norm is the first singular value of the same decomposition.

    Args:
        a: Input matrix
        top_k: Number of singular values to report (clipped to min(m, n))
    """
    a = as_matrix(a)
    if top_k < 1:
        raise ParameterError(f"top_k must be >= 1, got {top_k}")
    values = _leading_singular_values(a, top_k)
    return SpectrumSummary(
        shape=a.shape,
        top_singular_values=values,
        two_norm=values[0],
        f_norm=frobenius_norm(a),
        nnz=int(np.count_nonzero(a)),
    )


def compare_spectra(a, a_tilde, top_k: int) -> SpectrumDelta:
    """Paired top-k spectra of a and a_tilde plus the error norms."""
    a = as_matrix(a, "original")
    a_tilde = as_matrix(a_tilde, "modified")
    if a.shape != a_tilde.shape:
        raise ShapeMismatchError("cannot compare spectra", a.shape, a_tilde.shape)
    if top_k < 1:
        raise ParameterError(f"top_k must be >= 1, got {top_k}")
    err_two, err_f = sparsification_error(a, a_tilde)
    return SpectrumDelta(
        shape=a.shape,
        original_values=_leading_singular_values(a, top_k),
        tilde_values=_leading_singular_values(a_tilde, top_k),
        err_two_norm=err_two,
        err_f_norm=err_f,
    )


def trajectory_report(snapshots: Sequence[Tuple[str, object]]) -> NormTrajectory:
    """
    Spectral and Frobenius norm of each (label, matrix) snapshot, in order.

    Raises:
        ParameterError: If there are no snapshots
        ShapeMismatchError: If a snapshot's shape differs from the first one
    """
    if not snapshots:
        raise ParameterError("trajectory_report needs at least one snapshot")
    labels, two_norms, f_norms = [], [], []
    expected = None
    for label, matrix in snapshots:
        matrix = as_matrix(matrix, f"snapshot {label!r}")
        if expected is None:
            expected = matrix.shape
        elif matrix.shape != expected:
            raise ShapeMismatchError(
                f"snapshot {label!r} has an inconsistent shape", matrix.shape, expected
            )
        labels.append(str(label))
        two_norms.append(spectral_norm(matrix))
        f_norms.append(frobenius_norm(matrix))
    return NormTrajectory(labels=labels, two_norms=two_norms, f_norms=f_norms)


def sweep_configs(
    method: SparsifyMethod,
    values: Iterable[float],
    fixed: Optional[SparsifyConfig] = None,
    seed: int = 0,
    ranks: Optional[Iterable[int]] = None,
) -> List[SparsifyConfig]:
    """
    Expand a sweep into concrete configurations.

    For the threshold method the values are keep fractions; otherwise they
    are quantiles q. With ``ranks`` (lowrank only) the grid is q x rank in
    row-major order.
    """
    method = SparsifyMethod(method)
    values = list(values)
    if not values:
        raise ParameterError("sweep needs at least one setting")
    base = {"c": fixed.c, "q": fixed.q, "rank_k": fixed.rank_k} if fixed else {}
    base["seed"] = seed

    if method == SparsifyMethod.THRESHOLD:
        if ranks:
            raise ParameterError("ranks only apply to the lowrank method")
        return [
            SparsifyConfig(method=method, keep_fraction=v, seed=seed) for v in values
        ]
    if ranks is None:
        return [SparsifyConfig(**{**base, "method": method, "q": v}) for v in values]
    if method != SparsifyMethod.LOWRANK:
        raise ParameterError("ranks only apply to the lowrank method")
    return [
        SparsifyConfig(**{**base, "method": method, "q": q, "rank_k": k})
        for q, k in itertools.product(values, list(ranks))
    ]


def _sweep_row(a: np.ndarray, config: SparsifyConfig) -> SweepRow:
    result = sparsify(a, config)
    return SweepRow(
        config=config,
        achieved_sparsity=result.achieved_sparsity,
        err_two_norm=result.err_two_norm,
        err_f_norm=result.err_f_norm,
        tilde_f_norm=frobenius_norm(result.sparse),
        degenerate=result.degenerate,
    )


def sparsity_sweep(
    a,
    method: SparsifyMethod,
    fractions_or_qs: Iterable[float],
    fixed: Optional[SparsifyConfig] = None,
    seed: int = 0,
    ranks: Optional[Iterable[int]] = None,
) -> List[SweepRow]:
    """
    Sparsify the same matrix under every setting of a sweep.

    Settings are evaluated on a thread pool capped by SPECTRAPRUNE_THREADS;
    the per-entry random streams make each row independent of evaluation
    order, and rows are returned in grid order.
    """
    a = as_matrix(a)
    configs = sweep_configs(method, fractions_or_qs, fixed, seed, ranks)
    workers = min(get_settings().threads, len(configs))
    logger.info(f"Sweeping {len(configs)} settings of {method} on {workers} threads")
    if workers <= 1:
        return [_sweep_row(a, config) for config in configs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda config: _sweep_row(a, config), configs))


def channel_sweep(t) -> List[ChannelSweepRow]:
    """Remove each output channel alone and record ||A~||_F, by channel index."""
    t = as_kernel(t)
    if t.shape[0] < 2:
        raise ParameterError(f"channel_sweep needs O >= 2, got {t.shape[0]}")
    return removal_effects(t)


def removal_effects(t) -> List[ChannelSweepRow]:
    """Per-channel rows of channel_sweep for any number of output channels."""
    t = as_kernel(t)
    a = unfold_kernel(t)
    scores = sorted(channel_scores(t), key=lambda s: s.channel_index)
    rows = []
    for score in scores:
        remaining = a.copy()
        remaining[:, score.channel_index] = 0.0
        rows.append(
            ChannelSweepRow(
                channel_index=score.channel_index,
                l1_mass=score.l1_mass,
                l2_mass=score.l2_mass,
                tilde_f_norm=frobenius_norm(remaining),
            )
        )
    return rows
