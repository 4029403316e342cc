"""
Streamable HTTP transport for the checker tools.

JSON-RPC messages are posted to ``/mcp``; ``/`` and ``/health`` serve
server information and a liveness check.
"""

import logging
import sys
from contextlib import asynccontextmanager
from typing import Any

import uvicorn
from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .config import HTTP_HOST, HTTP_PORT, LOG_LEVEL
from .errors import CheckerError
from .tools import HANDLERS, TOOLS, run_tool

logger = logging.getLogger(__name__)

SERVER_NAME = "mitigation-checker-http"
VERSION = "0.1.0"

INVALID_PARAMS = -32602
METHOD_NOT_FOUND = -32601
INTERNAL_ERROR = -32603


@asynccontextmanager
async def lifespan(app: FastAPI):
    sys.stderr.write("Starting HTTP MCP server...\n")
    yield
    sys.stderr.write("Shutting down HTTP MCP server...\n")


app = FastAPI(
    title="Mitigation Checker MCP Server",
    description="Model checking of epidemic-mitigation requirements via MCP over HTTP",
    version=VERSION,
    lifespan=lifespan,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=[
        "http://localhost:6274",    # MCP Inspector
        "http://127.0.0.1:6274",
        "http://localhost:3000",
        "http://127.0.0.1:3000",
    ],
    allow_methods=["*"],
    allow_headers=["*"],
)


def _error(message_id: Any, code: int, text: str, status_code: int) -> JSONResponse:
    return JSONResponse(
        {"jsonrpc": "2.0", "id": message_id, "error": {"code": code, "message": text}},
        status_code=status_code,
    )


def _result(message_id: Any, result: dict) -> JSONResponse:
    return JSONResponse({"jsonrpc": "2.0", "id": message_id, "result": result})


@app.get("/")
async def root():
    return {
        "name": "Mitigation Checker MCP Server",
        "version": VERSION,
        "description": "Temporal, epistemic, strategic and probabilistic checking of mitigation requirements",
        "transport": "streamable-http",
        "endpoints": {"mcp": "/mcp"},
    }


@app.get("/health")
async def health():
    return {"status": "healthy"}


async def _handle_mcp_message(message: dict) -> JSONResponse:
    method = message.get("method")
    message_id = message.get("id")

    if method == "initialize":
        return _result(message_id, {
            "protocolVersion": "2024-11-05",
            "capabilities": {"tools": {}},
            "serverInfo": {"name": SERVER_NAME, "version": VERSION},
        })

    if method == "tools/list":
        return _result(message_id, {"tools": [
            {"name": t.name, "description": t.description, "inputSchema": t.inputSchema}
            for t in TOOLS
        ]})

    if method == "tools/call":
        params = message.get("params", {})
        name = params.get("name")
        if name not in HANDLERS:
            return _error(message_id, METHOD_NOT_FOUND, f"Unknown tool: {name}", 500)
        try:
            text = run_tool(name, params.get("arguments", {}))
        except (CheckerError, ValueError) as e:
            logger.info("tool %s rejected input: %s", name, e)
            return _error(message_id, INVALID_PARAMS, str(e), 400)
        return _result(message_id, {"content": [{"type": "text", "text": text}]})

    return _error(message_id, METHOD_NOT_FOUND, f"Method not found: {method}", 400)


@app.post("/mcp")
async def handle_mcp_endpoint(request: Request):
    """JSON-RPC endpoint for the Streamable HTTP transport."""
    message: dict = {}
    try:
        message = await request.json()
        return await _handle_mcp_message(message)
    except Exception as e:
        logger.exception("error handling MCP message")
        return _error(message.get("id"), INTERNAL_ERROR, f"Internal error: {e}", 500)


def main(host: str = HTTP_HOST, port: int = HTTP_PORT) -> None:
    """Start the HTTP tool server."""
    logging.basicConfig(level=LOG_LEVEL, stream=sys.stderr)
    sys.stderr.write(f"Starting HTTP MCP server on {host}:{port}\n")
    uvicorn.run(app, host=host, port=port, log_level=LOG_LEVEL.lower())


if __name__ == "__main__":
    main()
