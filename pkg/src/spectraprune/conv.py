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
Convolution as matrix multiplication, and output-channel pruning.

Kernels are [O][C][k_h][k_w] arrays, signals [C][H][W]. Unfolding a kernel
gives the (C*k_h*k_w) x O matrix A whose column o is filter o flattened in
(channel, row, col) order; im2col lays out receptive fields in the same
order, so a convolution is Z^T A. "Convolution" here is cross-correlation
(no kernel flip), the neural-network convention.
"""

import logging
from typing import List, Tuple

import numpy as np
import numpy.typing as npt
from numpy.lib.stride_tricks import sliding_window_view

from .errors import ParameterError, ShapeMismatchError
from .linalg import Matrix, as_matrix, matmul
from .models.reports import ChannelScore

logger = logging.getLogger(__name__)

KernelTensor = npt.NDArray[np.float64]
SignalTensor = npt.NDArray[np.float64]


def _as_tensor(data, ndim: int, name: str) -> np.ndarray:
    array = np.array(data, dtype=np.float64, order="C", copy=True)
    if array.ndim != ndim:
        raise ParameterError(f"{name} must be {ndim}-D, got shape {array.shape}")
    if any(dim < 1 for dim in array.shape):
        raise ParameterError(f"{name} dimensions must be >= 1, got {array.shape}")
    if not np.all(np.isfinite(array)):
        raise ParameterError(f"{name} contains NaN or Inf entries")
    array.setflags(write=False)
    return array


def as_kernel(data) -> KernelTensor:
    """Validate a [O][C][k_h][k_w] kernel tensor."""
    return _as_tensor(data, 4, "kernel")


def as_signal(data) -> SignalTensor:
    """Validate a [C][H][W] signal tensor."""
    return _as_tensor(data, 3, "signal")


def unfold_kernel(t) -> Matrix:
    """Flatten a kernel into the (C*k_h*k_w) x O matrix A."""
    t = as_kernel(t)
    return as_matrix(t.reshape(t.shape[0], -1).T)


def fold_kernel(a, o: int, c: int, k_h: int, k_w: int) -> KernelTensor:
    """Inverse of unfold_kernel."""
    a = as_matrix(a)
    expected = (c * k_h * k_w, o)
    if a.shape != expected:
        raise ShapeMismatchError(
            f"cannot fold into kernel (O={o}, C={c}, {k_h}x{k_w})", a.shape, expected
        )
    return as_kernel(a.T.reshape(o, c, k_h, k_w))


def output_size(
    height: int, width: int, k_h: int, k_w: int, stride: int, pad: int
) -> Tuple[int, int]:
    """Spatial output size of a strided, zero-padded convolution."""
    if stride < 1:
        raise ParameterError(f"stride must be >= 1, got {stride}")
    if pad < 0:
        raise ParameterError(f"pad must be >= 0, got {pad}")
    if k_h > height + 2 * pad or k_w > width + 2 * pad:
        raise ShapeMismatchError(
            "kernel is larger than the padded input",
            (k_h, k_w),
            (height + 2 * pad, width + 2 * pad),
        )
    return (height + 2 * pad - k_h) // stride + 1, (width + 2 * pad - k_w) // stride + 1


def _padded(x: SignalTensor, pad: int) -> np.ndarray:
    return np.pad(x, ((0, 0), (pad, pad), (pad, pad)))


def im2col(x, k_h: int, k_w: int, stride: int = 1, pad: int = 0) -> Matrix:
    """
    Rearrange receptive fields into columns.

    Returns:
        Z of shape (C*k_h*k_w) x (H_out*W_out); column p is the field at
        output position p (row-major), flattened in (channel, row, col) order
    """
    x = as_signal(x)
    h_out, w_out = output_size(x.shape[1], x.shape[2], k_h, k_w, stride, pad)
    windows = sliding_window_view(_padded(x, pad), (k_h, k_w), axis=(1, 2))
    windows = windows[:, ::stride, ::stride][:, :h_out, :w_out]
    # (C, H_out, W_out, k_h, k_w) -> (C, k_h, k_w, H_out, W_out)
    columns = windows.transpose(0, 3, 4, 1, 2).reshape(-1, h_out * w_out)
    return as_matrix(columns)


def _check_channels(x: SignalTensor, t: KernelTensor) -> None:
    if x.shape[0] != t.shape[1]:
        raise ShapeMismatchError(
            "kernel input channels must match signal channels", t.shape, x.shape
        )


def conv_direct(x, t, stride: int = 1, pad: int = 0) -> SignalTensor:
    """Cross-correlation by explicit loops over output positions."""
    x = as_signal(x)
    t = as_kernel(t)
    _check_channels(x, t)
    k_h, k_w = t.shape[2], t.shape[3]
    h_out, w_out = output_size(x.shape[1], x.shape[2], k_h, k_w, stride, pad)
    padded = _padded(x, pad)

    out = np.zeros((t.shape[0], h_out, w_out))
    for i in range(h_out):
        for j in range(w_out):
            r, c = i * stride, j * stride
            field = padded[:, r : r + k_h, c : c + k_w]
            # sum of element-wise products for every output channel
            out[:, i, j] = np.tensordot(t, field, axes=3)
    out.setflags(write=False)
    return out


def conv_as_matmul(x, t, stride: int = 1, pad: int = 0) -> SignalTensor:
    """Convolution computed as Z^T A, reshaped to [O][H_out][W_out]."""
    x = as_signal(x)
    t = as_kernel(t)
    _check_channels(x, t)
    k_h, k_w = t.shape[2], t.shape[3]
    h_out, w_out = output_size(x.shape[1], x.shape[2], k_h, k_w, stride, pad)
    z = im2col(x, k_h, k_w, stride, pad)
    y = matmul(z.T, unfold_kernel(t))
    out = np.ascontiguousarray(y.T.reshape(t.shape[0], h_out, w_out))
    out.setflags(write=False)
    return out


def channel_scores(t) -> List[ChannelScore]:
    """
    Per output channel L1 mass and unfolded-column L2 norm.

    Returns:
        Scores sorted by ascending l1_mass, ties by channel index
    """
    t = as_kernel(t)
    flat = t.reshape(t.shape[0], -1)
    l1 = np.sum(np.abs(flat), axis=1)
    l2 = np.linalg.norm(unfold_kernel(t), axis=0)
    order = np.lexsort((np.arange(t.shape[0]), l1))
    return [
        ChannelScore(channel_index=int(o), l1_mass=float(l1[o]), l2_mass=float(l2[o]))
        for o in order
    ]


def prune_channels(t, n_remove: int) -> Tuple[KernelTensor, List[int]]:
    """
    Zero the n_remove output channels with the smallest L1 mass.

    The tensor keeps its shape so downstream layers stay valid.

    Returns:
        (pruned kernel, removed channel indices in ranking order)
    """
    t = as_kernel(t)
    if not 0 <= n_remove < t.shape[0]:
        raise ParameterError(
            f"n_remove must lie in [0, {t.shape[0] - 1}], got {n_remove}"
        )
    removed = [score.channel_index for score in channel_scores(t)[:n_remove]]
    pruned = t.copy()
    pruned[removed] = 0.0
    pruned.setflags(write=False)
    logger.info(f"Zeroed {len(removed)} of {t.shape[0]} channels: {removed}")
    return pruned, removed
