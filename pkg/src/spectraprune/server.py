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
MCP server main entry point.

Exposes the seven spectraprune commands as tools over streamable HTTP
(default) or stdio: python -m src.spectraprune.server [stdio]
"""

import asyncio
import logging
import sys
from typing import Any, Dict

from mcp.server import Server
from mcp.server.fastmcp import FastMCP
from mcp.server.stdio import stdio_server
from mcp.types import Tool

from .config import get_settings
from .models.parameters.command_params import (
    AnalyzeParams,
    ChannelsParams,
    CompareParams,
    ConvCheckParams,
    SparsifyParams,
    SweepParams,
    TrajectoryParams,
)
from .tools import (
    analyze_tool,
    channels_tool,
    compare_tool,
    conv_check_tool,
    sparsify_tool,
    sweep_tool,
    trajectory_tool,
)

SERVICE_NAME = "spectraprune MCP Server"

# Setup logging
logging.basicConfig(level=get_settings().log_level)
logger = logging.getLogger(__name__)


# Tool registry - single source of truth for all tools
TOOL_REGISTRY: Dict[str, Dict[str, Any]] = {
    # Spectrum Tools
    "analyze": {
        "description": (
            "Leading singular values, spectral and Frobenius norm of a 2-D "
            "matrix or 4-D kernel NPY file"
        ),
        "schema": AnalyzeParams,
        "handler": analyze_tool,
    },
    "compare": {
        "description": "Paired spectra and error norms of two same-shaped NPY files",
        "schema": CompareParams,
        "handler": compare_tool,
    },
    "trajectory": {
        "description": (
            "Spectral and Frobenius norm of each training snapshot, with the "
            "change between consecutive snapshots"
        ),
        "schema": TrajectoryParams,
        "handler": trajectory_tool,
    },
    # Sparsification Tools
    "sparsify": {
        "description": (
            "Sparsify a weight file by magnitude threshold, Bernoulli sampling "
            "or low-rank guided sampling; writes the result and its mask"
        ),
        "schema": SparsifyParams,
        "handler": sparsify_tool,
    },
    "sweep": {
        "description": (
            "Sparsification error over a grid of keep fractions, quantiles "
            "and ranks"
        ),
        "schema": SweepParams,
        "handler": sweep_tool,
    },
    "channels": {
        "description": (
            "Score convolution output channels by L1 mass, or zero the N "
            "weakest ones"
        ),
        "schema": ChannelsParams,
        "handler": channels_tool,
    },
    "conv_check": {
        "description": (
            "Check that direct convolution and its matrix form agree within 1e-10"
        ),
        "schema": ConvCheckParams,
        "handler": conv_check_tool,
    },
}


# Create FastMCP app with stateless HTTP (no SSE)
app = FastMCP("spectraprune", stateless_http=True, json_response=True)


def register_tools():
    """Register all tools from the registry with FastMCP."""
    for tool_name, tool_config in TOOL_REGISTRY.items():
        schema = tool_config["schema"]
        handler_func = tool_config["handler"]
        description = tool_config["description"]

        async def create_handler(arguments, handler=handler_func):
            return await handler(arguments.model_dump(mode="json"))

        create_handler.__name__ = tool_name
        create_handler.__doc__ = description
        create_handler.__annotations__ = {"arguments": schema}

        app.tool(description=description)(create_handler)


register_tools()


@app.custom_route("/health", ["GET"])
async def health_check(request):
    """Health check endpoint."""
    from starlette.responses import JSONResponse

    return JSONResponse(
        {"status": "healthy", "service": SERVICE_NAME, "tools": len(TOOL_REGISTRY)}
    )


async def run_stdio_server():
    """Run the MCP server with stdio transport."""
    server = Server("spectraprune")

    @server.list_tools()
    async def handle_list_tools():
        """List all available tools."""
        return [
            Tool(
                name=tool_name,
                description=tool_config["description"],
                inputSchema=tool_config["schema"].model_json_schema(),
            )
            for tool_name, tool_config in TOOL_REGISTRY.items()
        ]

    @server.call_tool()
    async def handle_call_tool(name: str, arguments: dict):
        """Handle tool calls."""
        if name in TOOL_REGISTRY:
            return await TOOL_REGISTRY[name]["handler"](arguments)
        else:
            raise ValueError(f"Unknown tool: {name}")

    async with stdio_server() as (read_stream, write_stream):
        await server.run(
            read_stream, write_stream, server.create_initialization_options()
        )


if __name__ == "__main__":
    transport_type = sys.argv[1] if len(sys.argv) > 1 else "streamable-http"

    if transport_type == "stdio":
        asyncio.run(run_stdio_server())
    else:
        app.settings.host = "0.0.0.0"
        app.settings.port = 8000
        app.run(transport="streamable-http")
