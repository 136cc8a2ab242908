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
Spectrum MCP tools: analyze, compare and trajectory.

Also holds the shared runner every tool uses to validate its arguments,
execute the command off the event loop and format the reply.
"""

import asyncio
import logging
from typing import Any, Dict, List

from mcp.types import TextContent
from pydantic import ValidationError

from ..commands import EXIT_OK, execute, publish
from ..errors import SpectraPruneError
from ..handlers import format_report_summary
from ..weights_io import ReportFormat, render_report

logger = logging.getLogger(__name__)


def _format_error_response(error: Exception, operation: str) -> List[TextContent]:
    """Format error into user-friendly MCP response."""
    if isinstance(error, (SpectraPruneError, ValidationError)):
        error_msg = str(error)
    else:
        error_msg = f"Unexpected error during {operation}: {str(error)}"

    logger.error(f"Tool error in {operation}: {error_msg}")
    return [TextContent(type="text", text=f"Error: {error_msg}")]


async def run_command_tool(command: str, arguments: Dict[str, Any]) -> List[TextContent]:
    """
    Run a command for a tool call and reply with a summary plus the JSON report.

    A report path in the arguments is honoured as well; the reply always
    carries the JSON document.
    """
    try:
        outcome = await asyncio.to_thread(execute, command, arguments)
        await asyncio.to_thread(publish, outcome)
    except Exception as e:
        return _format_error_response(e, command)

    text = format_report_summary(outcome.report)
    if outcome.exit_code != EXIT_OK:
        text += f"\nCommand finished with exit code {outcome.exit_code}.\n"
    if outcome.report_path:
        text += f"\nReport written to {outcome.report_path}\n"
    for path in outcome.written:
        text += f"Wrote {path}\n"
    document = render_report(outcome.report, ReportFormat.JSON)
    text += f"\n```json\n{document}```\n"
    return [TextContent(type="text", text=text)]


async def analyze_tool(arguments: Dict[str, Any]) -> List[TextContent]:
    """Spectrum summary of one matrix or kernel file."""
    return await run_command_tool("analyze", arguments)


async def compare_tool(arguments: Dict[str, Any]) -> List[TextContent]:
    """Paired spectra and error norms of two same-shaped files."""
    return await run_command_tool("compare", arguments)


async def trajectory_tool(arguments: Dict[str, Any]) -> List[TextContent]:
    """Norm trajectory over snapshot files."""
    return await run_command_tool("trajectory", arguments)
