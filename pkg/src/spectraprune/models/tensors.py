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
In-memory form of an NPY tensor file.
"""

from enum import Enum
from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class TensorDtype(str, Enum):
    """On-disk element types; payloads are always float64 in memory."""

    F32 = "f32"
    F64 = "f64"

    @property
    def descr(self) -> str:
        return "<f4" if self is TensorDtype.F32 else "<f8"

    @property
    def numpy_dtype(self) -> np.dtype:
        return np.dtype(self.descr)

    @classmethod
    def from_descr(cls, descr: str) -> "TensorDtype":
        return {"<f4": cls.F32, "<f8": cls.F64}[descr]


class TensorFile(BaseModel):
    """Element type, shape and C-order payload of one NPY file."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    dtype: TensorDtype = TensorDtype.F64
    shape: List[int] = Field(min_length=1)
    payload: np.ndarray = Field(description="float64 values shaped as `shape`")

    @model_validator(mode="after")
    def check_payload(self):
        if any(dim < 1 for dim in self.shape):
            raise ValueError(f"empty tensors are unsupported: shape {self.shape}")
        if tuple(self.payload.shape) != tuple(self.shape):
            raise ValueError(
                f"payload shape {self.payload.shape} does not match {self.shape}"
            )
        return self

    @property
    def ndim(self) -> int:
        return len(self.shape)

    @classmethod
    def from_array(cls, array, dtype: TensorDtype = TensorDtype.F64) -> "TensorFile":
        payload = np.ascontiguousarray(array, dtype=np.float64)
        return cls(dtype=dtype, shape=list(payload.shape), payload=payload)
