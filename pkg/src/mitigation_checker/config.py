"""
Configuration for checker runs and the tool servers.

Checker options travel as an immutable CheckOptions value; the servers read
their bind address and log level from the environment at import time.
"""

import os
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field

# Tool-server settings
HTTP_HOST = os.getenv("MITIGATION_HTTP_HOST", "127.0.0.1")
HTTP_PORT = int(os.getenv("MITIGATION_HTTP_PORT", "8000"))
LOG_LEVEL = os.getenv("MITIGATION_LOG_LEVEL", "INFO").upper()


class CheckMode(str, Enum):
    """Strategy semantics for coalition operators."""

    IR = "IR"  # perfect information, memoryless
    ir = "ir"  # imperfect information, uniform memoryless, objective


class CheckOptions(BaseModel):
    """Numerical and enumeration settings for one checking run."""

    model_config = ConfigDict(frozen=True)

    mode: CheckMode = CheckMode.IR
    eps: float = Field(default=1e-8, gt=0)
    eps_compare: float = Field(default=1e-9, ge=0)
    max_iter: int = Field(default=100_000, ge=1)
    literal_budget: int = Field(default=2, ge=1)
    rule_budget: int = Field(default=3, ge=1)
    max_candidates: int = Field(default=200_000, ge=1)
