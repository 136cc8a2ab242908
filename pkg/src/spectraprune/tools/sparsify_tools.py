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
Sparsification MCP tools: sparsify, sweep, channels and conv_check.
"""

from typing import Any, Dict, List

from mcp.types import TextContent

from .spectrum_tools import run_command_tool


async def sparsify_tool(arguments: Dict[str, Any]) -> List[TextContent]:
    return await run_command_tool("sparsify", arguments)


async def sweep_tool(arguments: Dict[str, Any]) -> List[TextContent]:
    return await run_command_tool("sweep", arguments)


async def channels_tool(arguments: Dict[str, Any]) -> List[TextContent]:
    return await run_command_tool("channels", arguments)


async def conv_check_tool(arguments: Dict[str, Any]) -> List[TextContent]:
    return await run_command_tool("conv-check", arguments)
