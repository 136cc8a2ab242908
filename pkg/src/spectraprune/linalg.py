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
Dense matrix helpers and the spectral machinery used by every other module.

Matrices are float64 numpy arrays in C order. ``as_matrix`` is the single
entry point that validates and freezes them; every public function accepts
anything array-like and returns read-only arrays.
"""

import logging
import math

import numpy as np
import numpy.typing as npt

from .errors import ConvergenceError, ParameterError, ShapeMismatchError
from .models.results import PowerIterationResult, SvdFactors

logger = logging.getLogger(__name__)

Matrix = npt.NDArray[np.float64]

# Power iteration defaults
DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 1000

# Randomized range finder settings
OVERSAMPLING = 10
POWER_ITERATIONS = 2

# Max-abs deviation of U^T U and V^T V from I tolerated by the SVD post-check
ORTHONORMALITY_TOL = 1e-8


def _freeze(array: np.ndarray) -> np.ndarray:
    array = np.ascontiguousarray(array, dtype=np.float64)
    array.setflags(write=False)
    return array


def as_matrix(data, name: str = "matrix") -> Matrix:
    """
    Validate and copy array-like data into an immutable float64 matrix.

    Args:
        data: Anything numpy can turn into a 2-D real array
        name: Label used in error messages

    Returns:
        Read-only C-ordered float64 array

    Raises:
        ParameterError: If the data is not 2-D, is empty or holds NaN/Inf
    """
    array = np.array(data, dtype=np.float64, order="C", copy=True)
    if array.ndim != 2:
        raise ParameterError(f"{name} must be 2-D, got shape {array.shape}")
    if array.shape[0] < 1 or array.shape[1] < 1:
        raise ParameterError(f"{name} must have at least one row and column")
    if not np.all(np.isfinite(array)):
        raise ParameterError(f"{name} contains NaN or Inf entries")
    array.setflags(write=False)
    return array


def _check_seed(seed: int) -> int:
    if seed < 0:
        raise ParameterError(f"seed must be non-negative, got {seed}")
    return int(seed)


def _post_check(factors: SvdFactors, rows: int, cols: int) -> SvdFactors:
    error = max(orthonormality_error(factors.U), orthonormality_error(factors.V))
    if error > ORTHONORMALITY_TOL:
        logger.warning(
            f"Singular vectors of the {rows}x{cols} SVD deviate from orthonormal "
            f"by {error:.2e}"
        )
    else:
        logger.debug(f"SVD of {rows}x{cols}: orthonormality error {error:.2e}")
    return factors


def svd_full(a) -> SvdFactors:
    """Thin SVD with r = min(rows, cols) singular triplets."""
    a = as_matrix(a)
    rows, cols = a.shape
    try:
        u, sigma, vt = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as e:
        raise ConvergenceError(f"SVD did not converge for a {rows}x{cols} matrix") from e
    factors = SvdFactors(
        U=_freeze(u),
        sigma=_freeze(sigma),
        V=_freeze(vt.T),
        rank_requested=sigma.shape[0],
    )
    return _post_check(factors, rows, cols)


def svd_truncated(a, k: int, seed: int = 0) -> SvdFactors:
    """
    Leading k singular triplets by randomized range finding.

    A Gaussian test matrix with OVERSAMPLING extra columns sketches the range
    of A, POWER_ITERATIONS subspace iterations sharpen it, and the small
    projected matrix Q^T A is decomposed exactly.

    Args:
        a: Input matrix
        k: Number of singular triplets, 1 <= k <= min(rows, cols)
        seed: Seed of the Gaussian test matrix

    Returns:
        SvdFactors holding the top-k triplets

    Raises:
        ParameterError: If k is out of range or the seed is negative
    """
    a = as_matrix(a)
    rows, cols = a.shape
    if not 1 <= k <= min(rows, cols):
        raise ParameterError(f"k must lie in [1, {min(rows, cols)}], got {k}")
    rng = np.random.default_rng(_check_seed(seed))

    width = min(k + OVERSAMPLING, rows, cols)
    omega = rng.standard_normal((cols, width))
    basis, _ = np.linalg.qr(a @ omega)
    for _ in range(POWER_ITERATIONS):
        basis, _ = np.linalg.qr(a.T @ basis)
        basis, _ = np.linalg.qr(a @ basis)

    inner = svd_full(basis.T @ a)
    logger.debug(f"Truncated SVD of {rows}x{cols} with sketch width {width}")
    factors = SvdFactors(
        U=_freeze(basis @ inner.U[:, :k]),
        sigma=_freeze(inner.sigma[:k]),
        V=_freeze(inner.V[:, :k]),
        rank_requested=k,
    )
    return _post_check(factors, rows, cols)


def power_iteration(
    a, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER
) -> PowerIterationResult:
    """
    Estimate the largest singular value by power iteration on A^T A.

    The start vector is the normalized all-ones vector. If A^T A annihilates
    it while A is non-zero, the iteration restarts from the unit vector of
    the column with the largest norm.

    Args:
        a: Input matrix
        tol: Relative change of the estimate at which iteration stops
        max_iter: Iteration cap

    Returns:
        PowerIterationResult with the estimate and a convergence flag
    """
    a = as_matrix(a)
    if tol <= 0:
        raise ParameterError(f"tol must be positive, got {tol}")
    if max_iter < 1:
        raise ParameterError(f"max_iter must be at least 1, got {max_iter}")
    if not np.any(a):
        return PowerIterationResult(value=0.0, iterations=0, converged=True)

    cols = a.shape[1]
    x = np.full(cols, 1.0 / math.sqrt(cols))
    y = a.T @ (a @ x)
    if not np.any(y):
        x = np.zeros(cols)
        x[int(np.argmax(np.sum(a * a, axis=0)))] = 1.0
        y = a.T @ (a @ x)

    estimate = math.sqrt(max(float(x @ y), 0.0))
    for iteration in range(1, max_iter + 1):
        x = y / np.linalg.norm(y)
        y = a.T @ (a @ x)
        value = math.sqrt(max(float(x @ y), 0.0))
        if abs(value - estimate) <= tol * value:
            logger.debug(f"Power iteration converged after {iteration} steps")
            return PowerIterationResult(
                value=value, iterations=iteration, converged=True
            )
        estimate = value

    logger.warning(
        f"Power iteration reached max_iter={max_iter} without converging "
        f"(tol={tol}); returning best estimate {estimate}"
    )
    return PowerIterationResult(value=estimate, iterations=max_iter, converged=False)


def spectral_norm(
    a, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER
) -> float:
    """Largest singular value of a (see power_iteration)."""
    return power_iteration(a, tol=tol, max_iter=max_iter).value


def frobenius_norm(a) -> float:
    """Square root of the sum of squared entries."""
    return float(np.linalg.norm(as_matrix(a)))


def low_rank_reconstruct(f: SvdFactors, k: int) -> Matrix:
    """Rank-k reconstruction sum_{i<k} sigma_i u_i v_i^T."""
    if not 1 <= k <= f.rank:
        raise ParameterError(f"k must lie in [1, {f.rank}], got {k}")
    return _freeze((f.U[:, :k] * f.sigma[:k]) @ f.V[:, :k].T)


def matmul(a, b) -> Matrix:
    """Matrix product a @ b."""
    a = as_matrix(a, "left operand")
    b = as_matrix(b, "right operand")
    if a.shape[1] != b.shape[0]:
        raise ShapeMismatchError("matmul needs a.cols == b.rows", a.shape, b.shape)
    return _freeze(a @ b)


def orthonormality_error(u) -> float:
    """Max-abs deviation of U^T U from the identity."""
    u = np.asarray(u, dtype=np.float64)
    return float(np.max(np.abs(u.T @ u - np.eye(u.shape[1]))))
