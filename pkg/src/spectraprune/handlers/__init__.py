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
Handlers that turn analysis results into report documents and text.
"""

from .report_handler import (
    channels_report,
    compare_report,
    conv_check_report,
    spectrum_report,
    sweep_report,
    trajectory_doc,
)
from .summary_handler import format_report_summary

__all__ = [
    "spectrum_report",
    "sweep_report",
    "trajectory_doc",
    "channels_report",
    "compare_report",
    "conv_check_report",
    "format_report_summary",
]
