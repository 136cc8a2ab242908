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
Result containers produced by the numerical core.

Arrays are stored read-only; the models themselves are frozen.
"""

from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .parameters.sparsify_params import SparsifyMethod


class SvdFactors(BaseModel):
    """Singular value decomposition A ~ U diag(sigma) V^T."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    U: np.ndarray = Field(description="m x r, orthonormal columns")
    sigma: np.ndarray = Field(description="r non-negative values, non-increasing")
    V: np.ndarray = Field(description="n x r, orthonormal columns")
    rank_requested: int = Field(ge=1)

    @property
    def rank(self) -> int:
        return int(self.sigma.shape[0])


class PowerIterationResult(BaseModel):
    """Dominant singular value estimate from power iteration on A^T A."""

    model_config = ConfigDict(frozen=True)

    value: float = Field(ge=0.0)
    iterations: int = Field(ge=0)
    converged: bool


class SparsifyResult(BaseModel):
    """Sparsified matrix, its support mask and the error it introduced."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    sparse: np.ndarray
    mask: np.ndarray
    threshold_t: float
    achieved_sparsity: float = Field(ge=0.0, le=1.0)
    err_two_norm: float = Field(ge=0.0)
    err_f_norm: float = Field(ge=0.0)
    method: SparsifyMethod
    seed: Optional[int] = None
    degenerate: bool = False

    @property
    def nnz(self) -> int:
        return int(np.count_nonzero(self.sparse))
