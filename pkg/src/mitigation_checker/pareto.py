"""
Pareto frontier over strategy score tables (all columns are maximized).
"""

from __future__ import annotations

import json
import logging

import numpy as np
from pydantic import BaseModel, Field, ValidationError

from .errors import ModelFormatError, RaggedTableError

logger = logging.getLogger(__name__)


class ScoreRow(BaseModel):
    strategy: str
    scores: list[float] = Field(default_factory=list)


class ScoreTable(BaseModel):
    """Rows are candidate strategies, columns requirement ids; cells in [0, 1]."""

    columns: list[str]
    rows: list[ScoreRow]

    def matrix(self) -> np.ndarray:
        for row in self.rows:
            if len(row.scores) != len(self.columns):
                raise RaggedTableError(row.strategy)
        values = np.array([row.scores for row in self.rows], dtype=float).reshape(len(self.rows), len(self.columns))
        if values.size and (values.min() < 0.0 or values.max() > 1.0):
            raise ModelFormatError("score table values must lie in [0, 1]")
        return values


def load_score_table(source: str) -> ScoreTable:
    try:
        return ScoreTable.model_validate(json.loads(source))
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None
    except ValidationError as e:
        first = e.errors()[0]
        raise ModelFormatError(f"{'.'.join(str(p) for p in first['loc'])}: {first['msg']}") from None


def nondominated_mask(points: np.ndarray) -> np.ndarray:
    """
    Boolean mask of rows not dominated by any other row.

    Row q dominates row p when q >= p in every column and q > p in some.
    """
    n = points.shape[0]
    mask = np.ones(n, dtype=bool)
    for i in range(n):
        ge_all = (points >= points[i]).all(axis=1)
        gt_any = (points > points[i]).any(axis=1)
        mask[i] = not (ge_all & gt_any).any()
    return mask


def pareto_frontier(table: ScoreTable) -> list[ScoreRow]:
    """Non-dominated rows, in input order."""
    mask = nondominated_mask(table.matrix())
    frontier = [row for row, keep in zip(table.rows, mask) if keep]
    logger.debug("pareto frontier: %d of %d rows", len(frontier), len(table.rows))
    return frontier
