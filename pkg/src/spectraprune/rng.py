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
Counter-based uniform draws keyed by (seed, row, column).

Each matrix row gets its own Philox stream: the key is the seed and the
counter starts at (0, row, 0, 0), so the draw for entry (i, j) depends only
on (seed, i, j). Results therefore do not depend on evaluation order and
row blocks can be generated independently.
"""

import numpy as np

from .errors import ParameterError

# Philox keys are 128-bit
MAX_SEED = 2**128 - 1


def _row_stream(seed: int, row: int) -> np.random.Generator:
    counter = np.array([0, row, 0, 0], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(counter=counter, key=seed))


def uniform_rows(seed: int, rows: range, cols: int) -> np.ndarray:
    """Uniform [0, 1) draws for the given rows, shape (len(rows), cols)."""
    if not 0 <= seed <= MAX_SEED:
        raise ParameterError(f"seed must lie in [0, 2**128), got {seed}")
    out = np.empty((len(rows), cols), dtype=np.float64)
    for offset, row in enumerate(rows):
        out[offset] = _row_stream(seed, row).random(cols)
    return out


def uniform_field(seed: int, shape) -> np.ndarray:
    """Uniform [0, 1) draw for every entry of a rows x cols matrix."""
    rows, cols = shape
    return uniform_rows(seed, range(rows), cols)
