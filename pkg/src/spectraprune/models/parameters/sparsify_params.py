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
Sparsification configuration shared by the library, the CLI and the tools.
"""

from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

# Low-rank sampling defaults
DEFAULT_Q = 0.3
DEFAULT_C = 0.5
DEFAULT_RANK = 5


class SparsifyMethod(str, Enum):
    """Available sparsification algorithms."""

    THRESHOLD = "threshold"
    BERNOULLI = "bernoulli"
    LOWRANK = "lowrank"


class SparsifyConfig(BaseModel):
    """One sparsification setting: the method plus the parameters it reads."""

    model_config = ConfigDict(frozen=True)

    method: SparsifyMethod = Field(description="Sparsification algorithm")
    keep_fraction: Optional[float] = Field(
        None,
        gt=0.0,
        le=1.0,
        description="Fraction of entries kept by magnitude (threshold method)",
    )
    q: float = Field(
        DEFAULT_Q,
        gt=0.0,
        lt=1.0,
        description="Quantile above which entries are kept unchanged",
    )
    c: float = Field(
        DEFAULT_C,
        ge=0.0,
        lt=1.0,
        description="Probability below which sampled entries are zeroed",
    )
    rank_k: int = Field(
        DEFAULT_RANK, ge=1, description="Rank of the guiding approximation (lowrank)"
    )
    seed: int = Field(0, ge=0, description="Seed of the per-entry random stream")

    @model_validator(mode="after")
    def check_method_fields(self):
        if self.method == SparsifyMethod.THRESHOLD and self.keep_fraction is None:
            raise ValueError("keep_fraction is required for the threshold method")
        if self.method != SparsifyMethod.THRESHOLD and self.keep_fraction is not None:
            raise ValueError(
                f"keep_fraction only applies to the threshold method, "
                f"not {self.method.value}"
            )
        return self
