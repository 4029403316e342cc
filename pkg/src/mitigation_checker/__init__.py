"""
Mitigation Checker - model checking of multi-agent requirements for
epidemic mitigation.

This package provides:
- a formula language with temporal, epistemic, strategic and probabilistic operators
- explicit-state concurrent game structures with local states
- checkers for each operator family
- an epidemic scenario generator and requirement catalog
- a command-line front end and MCP tool servers (stdio and HTTP)
"""

from .catalog import catalog
from .checker import check_formula, check_requirement
from .config import CheckMode, CheckOptions
from .errors import CheckerError
from .model import Model, load_model
from .parser import parse, parse_formula
from .report import Report, run_check
from .scenario import ScenarioParams, generate
from .temporal import Verdict

__version__ = "0.1.0"
__all__ = [
    "CheckMode",
    "CheckOptions",
    "CheckerError",
    "Model",
    "Report",
    "ScenarioParams",
    "Verdict",
    "catalog",
    "check_formula",
    "check_requirement",
    "generate",
    "load_model",
    "parse",
    "parse_formula",
    "run_check",
]
