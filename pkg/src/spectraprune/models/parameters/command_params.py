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
Parameter models for the seven commands.

The CLI builds these from parsed flags and the tool server validates tool
arguments against them, so both surfaces reject the same inputs.
"""

from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..tensors import TensorDtype
from .sparsify_params import (
    DEFAULT_C,
    DEFAULT_Q,
    DEFAULT_RANK,
    SparsifyConfig,
    SparsifyMethod,
)


class CommandParams(BaseModel):
    """Options every command accepts."""

    model_config = ConfigDict(extra="forbid")

    seed: int = Field(0, ge=0, description="Seed echoed into every report")
    out: Optional[str] = Field(None, description="Output path")
    format: Literal["json", "csv"] = Field("json", description="Report format")


class AnalyzeParams(CommandParams):
    """Spectrum summary of one weight matrix or kernel."""

    input: str = Field(description="NPY file, 2-D matrix or 4-D kernel")
    top_k: int = Field(10, ge=1, description="Number of singular values to report")


class SparsifyParams(CommandParams):
    """Sparsify one weight matrix or kernel."""

    input: str = Field(description="NPY file, 2-D matrix or 4-D kernel")
    method: SparsifyMethod = Field(description="threshold, bernoulli or lowrank")
    keep: Optional[float] = Field(None, description="Keep fraction (threshold)")
    q: Optional[float] = Field(None, description="Quantile kept unchanged")
    c: Optional[float] = Field(None, description="Lower probability cutoff")
    rank: Optional[int] = Field(None, description="Guiding rank (lowrank)")
    mask: Optional[str] = Field(None, description="Path for the 0/1 mask NPY")
    report: Optional[str] = Field(None, description="Report path (default stdout)")
    allow_degenerate: bool = Field(
        False, description="Accept a zero quantile cut instead of failing"
    )
    dtype: TensorDtype = Field(TensorDtype.F64, description="Element type written")

    @model_validator(mode="after")
    def check_method_flags(self):
        if self.method == SparsifyMethod.THRESHOLD:
            if self.keep is None:
                raise ValueError("--keep is required for the threshold method")
            if any(v is not None for v in (self.q, self.c, self.rank)):
                raise ValueError("--q/--c/--rank do not apply to the threshold method")
        else:
            if self.keep is not None:
                raise ValueError(f"--keep does not apply to the {self.method.value} method")
            if self.method == SparsifyMethod.BERNOULLI and self.rank is not None:
                raise ValueError("--rank only applies to the lowrank method")
        return self

    def to_config(self) -> SparsifyConfig:
        if self.method == SparsifyMethod.THRESHOLD:
            return SparsifyConfig(
                method=self.method, keep_fraction=self.keep, seed=self.seed
            )
        return SparsifyConfig(
            method=self.method,
            q=DEFAULT_Q if self.q is None else self.q,
            c=DEFAULT_C if self.c is None else self.c,
            rank_k=DEFAULT_RANK if self.rank is None else self.rank,
            seed=self.seed,
        )


class SweepParams(CommandParams):
    """Sparsity sweep over keep fractions, quantiles and ranks."""

    input: str = Field(description="NPY file, 2-D matrix or 4-D kernel")
    method: SparsifyMethod = Field(description="threshold, bernoulli or lowrank")
    grid: Optional[List[float]] = Field(
        None, description="Keep fractions (threshold) or quantiles (samplers)"
    )
    grid_q: Optional[List[float]] = Field(None, description="Quantile grid")
    grid_rank: Optional[List[int]] = Field(None, description="Rank grid (lowrank)")
    c: Optional[float] = Field(None, description="Fixed probability cutoff")
    rank: Optional[int] = Field(None, description="Fixed rank (lowrank)")

    @model_validator(mode="after")
    def check_grid(self):
        if self.grid is not None and self.grid_q is not None:
            raise ValueError("use either --grid or --grid-q, not both")
        values = self.grid if self.grid is not None else self.grid_q
        if not values:
            raise ValueError("the sweep grid must not be empty")
        if self.method == SparsifyMethod.THRESHOLD:
            if self.grid_q is not None:
                raise ValueError("the threshold method sweeps keep fractions via --grid")
            if self.c is not None or self.rank is not None:
                raise ValueError("--c/--rank do not apply to the threshold method")
        if self.method == SparsifyMethod.BERNOULLI and self.rank is not None:
            raise ValueError("--rank only applies to the lowrank method")
        if self.grid_rank is not None:
            if self.method != SparsifyMethod.LOWRANK:
                raise ValueError("--grid-rank only applies to the lowrank method")
            if not self.grid_rank:
                raise ValueError("the rank grid must not be empty")
            if self.rank is not None:
                raise ValueError("use either --rank or --grid-rank, not both")
        return self

    @property
    def values(self) -> List[float]:
        return list(self.grid if self.grid is not None else self.grid_q or [])

    def fixed_config(self) -> Optional[SparsifyConfig]:
        if self.method == SparsifyMethod.THRESHOLD:
            return None
        return SparsifyConfig(
            method=self.method,
            q=DEFAULT_Q,
            c=DEFAULT_C if self.c is None else self.c,
            rank_k=DEFAULT_RANK if self.rank is None else self.rank,
            seed=self.seed,
        )


class ConvCheckParams(CommandParams):
    """Compare direct convolution with its matrix form."""

    kernel: str = Field(description="4-D kernel NPY [O][C][k_h][k_w]")
    signal: str = Field(description="3-D signal NPY [C][H][W]")
    stride: int = Field(1, ge=1, description="Convolution stride")
    pad: int = Field(0, ge=0, description="Zero padding on each side")


class ChannelsParams(CommandParams):
    """Score output channels or zero the weakest ones."""

    kernel: str = Field(description="4-D kernel NPY [O][C][k_h][k_w]")
    remove: Optional[int] = Field(None, ge=0, description="Channels to zero")
    score_only: bool = Field(False, description="Only write the score report")
    report: Optional[str] = Field(None, description="Report path when removing")
    dtype: TensorDtype = Field(TensorDtype.F64, description="Element type written")

    @model_validator(mode="after")
    def check_mode(self):
        if (self.remove is None) == (not self.score_only):
            raise ValueError("give exactly one of --remove N or --score-only")
        return self


class CompareParams(CommandParams):
    """Paired spectra of two same-shaped weights."""

    a: str = Field(description="Original NPY")
    b: str = Field(description="Modified NPY")
    top_k: int = Field(10, ge=1, description="Number of singular value pairs")


class TrajectoryParams(CommandParams):
    """Norm trajectory over externally produced training snapshots."""

    snapshots: List[str] = Field(min_length=1, description="Snapshot NPY files")
    labels: Optional[List[str]] = Field(
        None, description="Labels, one per snapshot (default: file stems)"
    )

    @model_validator(mode="after")
    def check_labels(self):
        if self.labels is not None and len(self.labels) != len(self.snapshots):
            raise ValueError(
                f"{len(self.labels)} labels given for {len(self.snapshots)} snapshots"
            )
        return self
