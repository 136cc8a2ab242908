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
Matrix sparsification: hard thresholding, truncated Bernoulli sampling and
sampling guided by a low-rank approximation.

All three produce a SparsifyResult whose error norms are measured against
the original input. Ties between equal magnitudes are always broken by flat
row-major index, lower index first.
"""

import logging
import math
from typing import Tuple

import numpy as np

from .errors import ParameterError, ShapeMismatchError
from .linalg import (
    Matrix,
    as_matrix,
    frobenius_norm,
    low_rank_reconstruct,
    spectral_norm,
    svd_truncated,
)
from .models.parameters.sparsify_params import (
    DEFAULT_C,
    DEFAULT_Q,
    DEFAULT_RANK,
    SparsifyConfig,
    SparsifyMethod,
)
from .models.results import SparsifyResult
from .rng import uniform_field

logger = logging.getLogger(__name__)


def quantile_threshold(values, q: float) -> float:
    """
    Order statistic at index floor(n*q) of the given values.

    Selection uses an O(n) partition instead of a full sort.

    Args:
        values: Non-empty collection of reals (any shape, flattened row-major)
        q: Quantile in (0, 1)

    Returns:
        The cut t
    """
    flat = np.asarray(values, dtype=np.float64).ravel()
    if flat.size == 0:
        raise ParameterError("quantile_threshold needs at least one value")
    if not 0.0 < q < 1.0:
        raise ParameterError(f"q must lie in (0, 1), got {q}")
    index = int(math.floor(flat.size * q))
    return float(np.partition(flat, index)[index])


def sparsification_error(a, a_tilde) -> Tuple[float, float]:
    """Return (||A - A~||_2, ||A - A~||_F)."""
    a = as_matrix(a, "original")
    a_tilde = as_matrix(a_tilde, "sparsified")
    if a.shape != a_tilde.shape:
        raise ShapeMismatchError("shapes differ", a.shape, a_tilde.shape)
    diff = a - a_tilde
    return spectral_norm(diff), frobenius_norm(diff)


def _result(
    a: Matrix,
    sparse: np.ndarray,
    threshold_t: float,
    method: SparsifyMethod,
    seed=None,
    degenerate: bool = False,
) -> SparsifyResult:
    sparse = np.ascontiguousarray(sparse, dtype=np.float64)
    sparse.setflags(write=False)
    mask = (sparse != 0).astype(np.float64)
    mask.setflags(write=False)
    err_two, err_f = sparsification_error(a, sparse)
    return SparsifyResult(
        sparse=sparse,
        mask=mask,
        threshold_t=threshold_t,
        achieved_sparsity=1.0 - np.count_nonzero(sparse) / sparse.size,
        err_two_norm=err_two,
        err_f_norm=err_f,
        method=method,
        seed=seed,
        degenerate=degenerate,
    )


def _keep_largest(a: Matrix, count: int) -> Tuple[np.ndarray, float]:
    order = np.argsort(-np.abs(a), axis=None, kind="stable")
    keep = np.zeros(a.size, dtype=bool)
    keep[order[:count]] = True
    # t is the largest dropped magnitude, so kept entries satisfy |A_ij| > t
    # up to ties
    t = float(abs(a.flat[order[count]])) if count < a.size else 0.0
    return np.where(keep.reshape(a.shape), a, 0.0), t


def threshold_sparsify(a, keep_fraction: float) -> SparsifyResult:
    """
    Keep the round(keep_fraction * m * n) largest-magnitude entries.

    Args:
        a: Input matrix
        keep_fraction: Fraction of entries retained, in (0, 1]

    Returns:
        SparsifyResult; retained entries are bit-identical to the input
    """
    a = as_matrix(a)
    if not 0.0 < keep_fraction <= 1.0:
        raise ParameterError(f"keep_fraction must lie in (0, 1], got {keep_fraction}")
    count = int(math.floor(keep_fraction * a.size + 0.5))
    sparse, t = _keep_largest(a, count)
    return _result(a, sparse, t, SparsifyMethod.THRESHOLD)


def matched_threshold(a, result: SparsifyResult) -> SparsifyResult:
    """Threshold sketch of a with the same number of nonzeros as result."""
    a = as_matrix(a)
    if a.shape != result.sparse.shape:
        raise ShapeMismatchError("shapes differ", a.shape, result.sparse.shape)
    sparse, t = _keep_largest(a, result.nnz)
    return _result(a, sparse, t, SparsifyMethod.THRESHOLD)


def truncated_sample(
    a, guide, q: float, c: float, seed: int
) -> Tuple[Matrix, float, bool]:
    """
    Truncate-then-sample rule shared by the Bernoulli and low-rank samplers.

    Entries whose guide magnitude reaches the quantile cut t keep A_ij.
    Below it p_ij = (guide_ij / t)^2; entries with p_ij < c are zeroed and
    the rest become A_ij / p_ij with probability p_ij, else 0.

    Args:
        a: Matrix being sparsified
        guide: Matrix whose magnitudes set t and p_ij (A itself or B)
        q: Quantile in (0, 1)
        c: Lower probability cutoff in [0, 1)
        seed: Key of the per-entry random stream

    Returns:
        (sparse matrix, t, degenerate flag); degenerate means t == 0 and
        the input is returned unchanged
    """
    a = as_matrix(a)
    guide = as_matrix(guide, "guide")
    if a.shape != guide.shape:
        raise ShapeMismatchError("guide must match the input", a.shape, guide.shape)
    if not 0.0 <= c < 1.0:
        raise ParameterError(f"c must lie in [0, 1), got {c}")

    magnitudes = np.abs(guide)
    t = quantile_threshold(magnitudes, q)
    if t == 0.0:
        logger.warning(
            f"Degenerate quantile cut t == 0 for q={q} on a {a.shape} matrix; "
            "input kept unchanged"
        )
        return a.copy(), t, True

    sampled = magnitudes < t
    p = np.minimum(np.square(guide / t), 1.0)
    draws = uniform_field(seed, a.shape)
    kept = sampled & (p >= c) & (draws < p)
    rescaled = np.divide(a, p, out=np.zeros_like(a), where=kept)
    return np.where(sampled, rescaled, a), t, False


def bernoulli_sparsify(
    a, q: float = DEFAULT_Q, c: float = DEFAULT_C, seed: int = 0
) -> SparsifyResult:
    """Truncated Bernoulli sampling with probabilities from A itself."""
    a = as_matrix(a)
    sparse, t, degenerate = truncated_sample(a, a, q, c, seed)
    return _result(a, sparse, t, SparsifyMethod.BERNOULLI, seed, degenerate)


def lowrank_sparsify(
    a,
    q: float = DEFAULT_Q,
    c: float = DEFAULT_C,
    rank_k: int = DEFAULT_RANK,
    seed: int = 0,
) -> SparsifyResult:
    """
    Sampling guided by the rank-k approximation B of A.

    B comes from the randomized truncated SVD seeded with ``seed``; the
    quantile cut and the probabilities are read from |B_ij| while the kept
    or rescaled values are those of A.
    """
    a = as_matrix(a)
    if not 1 <= rank_k <= min(a.shape):
        raise ParameterError(f"rank_k must lie in [1, {min(a.shape)}], got {rank_k}")
    guide = low_rank_reconstruct(svd_truncated(a, rank_k, seed), rank_k)
    sparse, t, degenerate = truncated_sample(a, guide, q, c, seed)
    return _result(a, sparse, t, SparsifyMethod.LOWRANK, seed, degenerate)


def sparsify(a, config: SparsifyConfig) -> SparsifyResult:
    """Run the method named by config."""
    logger.debug(f"Sparsifying {np.shape(a)} with {config.model_dump_json()}")
    if config.method == SparsifyMethod.THRESHOLD:
        return threshold_sparsify(a, config.keep_fraction)
    if config.method == SparsifyMethod.BERNOULLI:
        return bernoulli_sparsify(a, q=config.q, c=config.c, seed=config.seed)
    return lowrank_sparsify(
        a, q=config.q, c=config.c, rank_k=config.rank_k, seed=config.seed
    )
