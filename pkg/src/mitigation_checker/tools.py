"""
Tool definitions shared by the stdio and HTTP servers.

Each tool takes JSON-able arguments and returns one text result. Checker
errors propagate as CheckerError; the transports decide how to report them.
"""

import json
import logging
from typing import Any, Callable

from mcp.types import Tool

from .config import CheckMode, CheckOptions
from .model import load_model, model_to_dict
from .pareto import load_score_table
from .pareto import pareto_frontier as frontier_rows
from .parser import parse, render_spec
from .report import check_all
from .scenario import ScenarioParams, generate
from .strategic import load_strategies

logger = logging.getLogger(__name__)


TOOLS = [
    Tool(
        name="parse_spec",
        description="Parse a requirement spec file and return it in normalized form. "
        "Syntax and well-formedness errors are reported with line and column.",
        inputSchema={
            "type": "object",
            "properties": {"spec_text": {"type": "string", "description": "spec-file text"}},
            "required": ["spec_text"],
        },
    ),
    Tool(
        name="check_model",
        description="Check every requirement of a spec file against a model (JSON) "
        "and return the report as JSON.",
        inputSchema={
            "type": "object",
            "properties": {
                "model_json": {"type": "string"},
                "spec_text": {"type": "string"},
                "mode": {"type": "string", "enum": ["IR", "ir"], "default": "IR"},
                "strategies_json": {"type": "string", "description": "strategy table for supp"},
            },
            "required": ["model_json", "spec_text"],
        },
    ),
    Tool(
        name="generate_epidemic",
        description="Generate an epidemic-mitigation model with a health authority "
        "and up to 4 citizens; returns the model JSON.",
        inputSchema={
            "type": "object",
            "properties": {
                "citizens": {"type": "integer", "minimum": 1, "maximum": 4, "default": 2},
                "adoption": {
                    "description": "'all', 'none' or the list of app users",
                    "anyOf": [{"type": "string", "enum": ["all", "none"]},
                              {"type": "array", "items": {"type": "integer"}}],
                    "default": "all",
                },
                "testing": {"type": "boolean", "default": True},
                "reliability": {"type": "number", "minimum": 0, "maximum": 1, "default": 1.0},
            },
            "required": [],
        },
    ),
    Tool(
        name="pareto_frontier",
        description="Return the non-dominated rows of a strategy score table (JSON).",
        inputSchema={
            "type": "object",
            "properties": {"scores_json": {"type": "string"}},
            "required": ["scores_json"],
        },
    ),
]


def parse_spec(spec_text: str) -> str:
    return render_spec(parse(spec_text))


def check_model(
    model_json: str, spec_text: str, mode: str = "IR", strategies_json: str | None = None
) -> str:
    model = load_model(model_json)
    requirements = parse(spec_text)
    strategies = load_strategies(strategies_json) if strategies_json else {}
    report = check_all(requirements, model, CheckOptions(mode=CheckMode(mode)), strategies)
    return report.to_json()


def generate_epidemic(
    citizens: int = 2, adoption: Any = "all", testing: bool = True, reliability: float = 1.0
) -> str:
    if adoption == "all":
        flags = None
    elif adoption == "none":
        flags = tuple(False for _ in range(citizens))
    else:
        flags = tuple(i in set(adoption) for i in range(1, citizens + 1))
    params = ScenarioParams(
        n_citizens=citizens, adoption=flags, testing=testing, notify_reliability=reliability
    )
    return json.dumps(model_to_dict(generate(params).model), indent=2)


def pareto_frontier(scores_json: str) -> str:
    table = load_score_table(scores_json)
    rows = frontier_rows(table)
    return json.dumps([row.model_dump() for row in rows], indent=2)


HANDLERS: dict[str, Callable[..., str]] = {
    "parse_spec": parse_spec,
    "check_model": check_model,
    "generate_epidemic": generate_epidemic,
    "pareto_frontier": pareto_frontier,
}


def run_tool(name: str, arguments: dict[str, Any] | None) -> str:
    """
    Run one tool by name.

    Raises:
        ValueError: unknown tool name or bad arguments
        CheckerError: the checker rejected the input
    """
    handler = HANDLERS.get(name)
    if handler is None:
        raise ValueError(f"Unknown tool: {name}")
    logger.info("tool call: %s", name)
    try:
        return handler(**(arguments or {}))
    except TypeError as e:
        raise ValueError(f"bad arguments for {name}: {e}") from None
