"""
Tests for the tool layer shared by the stdio and HTTP servers.
"""

import json

import pytest
from mcp import types

from mitigation_checker.errors import CheckerError
from mitigation_checker.server import create_server
from mitigation_checker.tools import HANDLERS, TOOLS, run_tool

MODEL = {
    "agents": ["a"],
    "atoms": ["p"],
    "states": [
        {"id": "s0", "local": {"a": "l0"}},
        {"id": "s1", "label": ["p"], "local": {"a": "l1"}},
    ],
    "initial": ["s0"],
    "transitions": [
        {"from": "s0", "joint": {"a": "go"}, "to": "s1"},
        {"from": "s1", "joint": {"a": "stay"}, "to": "s1"},
    ],
}


class TestRunTool:
    """Test suite for run_tool."""

    def test_every_tool_has_a_handler(self):
        """Listed tools and handlers agree."""
        assert [t.name for t in TOOLS] == list(HANDLERS)

    def test_unknown_tool(self):
        """Unknown names are a ValueError."""
        with pytest.raises(ValueError, match="Unknown tool"):
            run_tool("simulate_outbreak", {})

    def test_bad_arguments(self):
        """Missing or unexpected arguments are a ValueError."""
        with pytest.raises(ValueError, match="bad arguments"):
            run_tool("parse_spec", {})
        with pytest.raises(ValueError):
            run_tool("pareto_frontier", {"scores_json": "{}", "extra": 1})

    def test_parse_spec(self):
        """The spec comes back in normalized form."""
        text = run_tool("parse_spec", {"spec_text": 'requirement T "x":   A F (p)\n'})
        assert "  A F p" in text

    def test_parse_spec_error(self):
        """Syntax errors propagate as checker errors."""
        with pytest.raises(CheckerError):
            run_tool("parse_spec", {"spec_text": 'requirement T "x": A F (\n'})

    def test_check_model(self):
        """check_model returns the JSON report."""
        arguments = {"model_json": json.dumps(MODEL), "spec_text": 'requirement T "p": A F p\n', "mode": "ir"}
        report = json.loads(run_tool("check_model", arguments))
        assert report["rows"][0]["verdict"] == "true"
        assert report["config"]["mode"] == "ir"

    def test_generate_epidemic(self):
        """The generated model is valid model JSON."""
        data = json.loads(run_tool("generate_epidemic", {"citizens": 1, "adoption": [1]}))
        assert data["agents"] == ["a", "1", "env"]
        assert data["initial"]

    def test_generate_epidemic_invalid(self):
        """Generator parameters are validated."""
        with pytest.raises(ValueError):
            run_tool("generate_epidemic", {"citizens": 7})

    def test_pareto_frontier(self):
        """Only non-dominated rows are returned."""
        scores = {
            "columns": ["c"],
            "rows": [{"strategy": "x", "scores": [1.0]}, {"strategy": "y", "scores": [0.5]}],
        }
        rows = json.loads(run_tool("pareto_frontier", {"scores_json": json.dumps(scores)}))
        assert rows == [{"strategy": "x", "scores": [1.0]}]


class TestCreateServer:
    """Test suite for the stdio server factory."""

    def test_server_name(self):
        """The server announces itself by name."""
        assert create_server().name == "mitigation-checker"

    def test_handlers_registered(self):
        """Tool listing and tool calls are wired up."""
        server = create_server()
        assert types.ListToolsRequest in server.request_handlers
        assert types.CallToolRequest in server.request_handlers
