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
Report models emitted by the spectrum analysis layer.

These are plain data: every field serializes to JSON through
``model_dump(mode="json")`` and flattens to CSV columns in weights_io.
"""

from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from .parameters.sparsify_params import SparsifyConfig


class SpectrumSummary(BaseModel):
    """Leading singular values and norms of one matrix."""

    model_config = ConfigDict(frozen=True)

    shape: Tuple[int, int]
    top_singular_values: List[float]
    two_norm: float = Field(ge=0.0)
    f_norm: float = Field(ge=0.0)
    nnz: int = Field(ge=0)

    @model_validator(mode="after")
    def check_summary(self):
        values = self.top_singular_values
        if any(b > a for a, b in zip(values, values[1:])):
            raise ValueError("top_singular_values must be non-increasing")
        if not values:
            raise ValueError("top_singular_values must not be empty")
        if abs(self.two_norm - values[0]) > 1e-8 * values[0]:
            raise ValueError("two_norm must equal the first singular value")
        if self.nnz > self.shape[0] * self.shape[1]:
            raise ValueError("nnz exceeds rows*cols")
        return self


class SpectrumDelta(BaseModel):
    """Paired leading spectra of an original and a modified matrix."""

    model_config = ConfigDict(frozen=True)

    shape: Tuple[int, int]
    original_values: List[float]
    tilde_values: List[float]
    err_two_norm: float = Field(ge=0.0)
    err_f_norm: float = Field(ge=0.0)

    @computed_field
    @property
    def abs_deltas(self) -> List[float]:
        return [abs(a - b) for a, b in zip(self.original_values, self.tilde_values)]

    @computed_field
    @property
    def max_abs_delta(self) -> float:
        return max(self.abs_deltas, default=0.0)

    @computed_field
    @property
    def top_k_relative_error(self) -> float:
        """Euclidean distance of the paired spectra relative to the original."""
        scale = sum(a * a for a in self.original_values) ** 0.5
        gap = sum(d * d for d in self.abs_deltas) ** 0.5
        return gap / scale if scale > 0 else 0.0


class SweepRow(BaseModel):
    """One evaluated sparsification setting."""

    model_config = ConfigDict(frozen=True)

    config: SparsifyConfig
    achieved_sparsity: float = Field(ge=0.0, le=1.0)
    err_two_norm: float = Field(ge=0.0)
    err_f_norm: float = Field(ge=0.0)
    tilde_f_norm: float = Field(ge=0.0)
    degenerate: bool = False


class NormTrajectory(BaseModel):
    """Norms of a sequence of weight snapshots, in input order."""

    model_config = ConfigDict(frozen=True)

    labels: List[str]
    two_norms: List[float]
    f_norms: List[float]

    @model_validator(mode="after")
    def check_lengths(self):
        if not len(self.labels) == len(self.two_norms) == len(self.f_norms):
            raise ValueError("labels, two_norms and f_norms must have equal lengths")
        if any(v < 0 for v in self.two_norms + self.f_norms):
            raise ValueError("norms must be non-negative")
        return self

    @computed_field
    @property
    def two_norm_deltas(self) -> List[float]:
        return [b - a for a, b in zip(self.two_norms, self.two_norms[1:])]

    @computed_field
    @property
    def f_norm_deltas(self) -> List[float]:
        return [b - a for a, b in zip(self.f_norms, self.f_norms[1:])]


class ChannelScore(BaseModel):
    """Pruning score of one output channel of a convolution kernel."""

    model_config = ConfigDict(frozen=True)

    channel_index: int = Field(ge=0)
    l1_mass: float = Field(ge=0.0)
    l2_mass: float = Field(ge=0.0)


class ChannelSweepRow(BaseModel):
    """Effect of removing a single output channel."""

    model_config = ConfigDict(frozen=True)

    channel_index: int = Field(ge=0)
    l1_mass: float = Field(ge=0.0)
    l2_mass: float = Field(ge=0.0)
    tilde_f_norm: float = Field(ge=0.0)


class ConvCheckResult(BaseModel):
    """Outcome of comparing direct convolution with its matrix form."""

    model_config = ConfigDict(frozen=True)

    kernel_shape: Tuple[int, int, int, int]
    signal_shape: Tuple[int, int, int]
    output_shape: Tuple[int, int, int]
    stride: int
    pad: int
    max_abs_deviation: float
    tolerance: float

    @computed_field
    @property
    def passed(self) -> bool:
        return self.max_abs_deviation <= self.tolerance
