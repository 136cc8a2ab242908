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
Pydantic models for sparsification settings, results, reports and tensors.
"""

# Import command parameter models
from .parameters.command_params import (
    AnalyzeParams,
    ChannelsParams,
    CommandParams,
    CompareParams,
    ConvCheckParams,
    SparsifyParams,
    SweepParams,
    TrajectoryParams,
)

# Import sparsification settings
from .parameters.sparsify_params import SparsifyConfig, SparsifyMethod

# Import report models
from .reports import (
    ChannelScore,
    ChannelSweepRow,
    ConvCheckResult,
    NormTrajectory,
    SpectrumDelta,
    SpectrumSummary,
    SweepRow,
)

# Import result models
from .results import PowerIterationResult, SparsifyResult, SvdFactors
from .tensors import TensorDtype, TensorFile

__all__ = [
    # Parameters
    "CommandParams",
    "AnalyzeParams",
    "SparsifyParams",
    "SweepParams",
    "ConvCheckParams",
    "ChannelsParams",
    "CompareParams",
    "TrajectoryParams",
    "SparsifyConfig",
    "SparsifyMethod",
    # Results
    "SvdFactors",
    "PowerIterationResult",
    "SparsifyResult",
    # Reports
    "SpectrumSummary",
    "SpectrumDelta",
    "SweepRow",
    "NormTrajectory",
    "ChannelScore",
    "ChannelSweepRow",
    "ConvCheckResult",
    # Tensors
    "TensorDtype",
    "TensorFile",
]
