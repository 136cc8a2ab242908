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
Unified interface for all MCP tools.

This module exports the 7 spectraprune tools:
- Spectrum Tools (3)
- Sparsification Tools (4)
"""

from .sparsify_tools import (
    channels_tool,
    conv_check_tool,
    sparsify_tool,
    sweep_tool,
)
from .spectrum_tools import analyze_tool, compare_tool, trajectory_tool

__all__ = [
    # Spectrum Tools
    "analyze_tool",
    "compare_tool",
    "trajectory_tool",
    # Sparsification Tools
    "sparsify_tool",
    "sweep_tool",
    "channels_tool",
    "conv_check_tool",
]
