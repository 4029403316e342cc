"""
MCP server exposing the checker tools over stdio.
"""

import asyncio
import logging
import sys
from typing import Any

from mcp.server import Server
from mcp.server.stdio import stdio_server
from mcp.types import TextContent, Tool

from .config import LOG_LEVEL
from .errors import CheckerError
from .tools import TOOLS, run_tool

logger = logging.getLogger(__name__)


def create_server() -> Server:
    """Server instance with the tool handlers registered."""
    server = Server("mitigation-checker")

    @server.list_tools()
    async def list_tools() -> list[Tool]:
        return TOOLS

    @server.call_tool()
    async def call_tool(name: str, arguments: Any) -> list[TextContent]:
        """
        Run a tool; checker errors come back as an error text rather than a
        protocol failure.

        Raises:
            ValueError: If tool name is not recognized
        """
        try:
            text = run_tool(name, arguments)
        except CheckerError as e:
            text = f"error: {e}"
        return [TextContent(type="text", text=text)]

    return server


async def serve() -> None:
    server = create_server()
    async with stdio_server() as (read_stream, write_stream):
        await server.run(
            read_stream,
            write_stream,
            server.create_initialization_options(),
        )


def main() -> None:
    """Entry point for the stdio tool server."""
    # stdout carries protocol traffic
    logging.basicConfig(level=LOG_LEVEL, stream=sys.stderr)
    try:
        asyncio.run(serve())
    except KeyboardInterrupt:
        sys.stderr.write("\nShutting down server...\n")
        sys.exit(0)
    except Exception as e:
        sys.stderr.write(f"Server error: {e}\n")
        sys.exit(1)


if __name__ == "__main__":
    main()
