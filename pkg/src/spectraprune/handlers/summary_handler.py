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
Summary handler for tool replies.

Provides a short markdown digest of a report document.
"""

from ..weights_io import Report

# Constants
MAX_SUMMARY_ROWS = 10
SUMMARY_KEYS = (
    "two_norm",
    "f_norm",
    "achieved_sparsity",
    "err_two_norm",
    "err_f_norm",
    "tilde_f_norm",
    "max_abs_deviation",
    "passed",
)


def _format_value(value) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def format_report_summary(report: Report) -> str:
    """
    Format the leading rows of a report as markdown bullets.

    Args:
        report: Report document

    Returns:
        Markdown string; empty reports give a one-line notice
    """
    title = f"**{report.schema_name}** - {len(report.rows)} rows"
    if not report.rows:
        return f"{title}\nNo rows.\n"

    lines = [title]
    for index, row in enumerate(report.rows[:MAX_SUMMARY_ROWS], start=1):
        parts = [
            f"{key}={_format_value(row[key])}" for key in SUMMARY_KEYS if key in row
        ]
        lines.append(f"- row {index}: " + (", ".join(parts) or "(no norm columns)"))
    if len(report.rows) > MAX_SUMMARY_ROWS:
        lines.append(f"- ... and {len(report.rows) - MAX_SUMMARY_ROWS} more")
    return "\n".join(lines) + "\n"
