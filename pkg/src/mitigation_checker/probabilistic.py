"""
Maximal guaranteed reachability probabilities in the induced stochastic game.

The coalition maximizes, the remaining agents minimize, nature resolves the
transition distributions. Values are computed by value iteration over a
sparse matrix with one row per (state, coalition choice, opponent choice).
"""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

import numpy as np
from scipy import sparse

from . import formula as fm
from .config import CheckOptions
from .errors import BindingError, ConvergenceError, UnsupportedConstructError
from .model import Model
from .strategic import StrategicChecker
from .temporal import Verdict

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ValueVector:
    values: Mapping[str, float]
    iterations: int
    residual: float


@dataclass(frozen=True, eq=False)
class GameMatrix:
    """Row layout of the game restricted to a set of states."""

    states: np.ndarray  # global indices, sorted
    matrix: sparse.csr_matrix  # rows x len(states)
    choice_starts: np.ndarray  # first row of each coalition choice
    state_starts: np.ndarray  # first choice of each state

    @classmethod
    def build(cls, model: Model, coalition: frozenset[str], universe: Iterable[int]) -> "GameMatrix":
        states = np.array(sorted(universe), dtype=np.int64)
        local = {int(s): i for i, s in enumerate(states)}
        positions = [i for i, a in enumerate(model.agents) if a in coalition]
        rows, cols, data = [], [], []
        choice_starts, state_starts = [], []
        row = 0
        for s in states:
            state_starts.append(len(choice_starts))
            groups: dict[tuple[str, ...], list] = defaultdict(list)
            for joint, dist in model.transitions[int(s)].items():
                groups[tuple(joint[i] for i in positions)].append(dist)
            for _, dists in sorted(groups.items()):
                choice_starts.append(row)
                for dist in dists:
                    for t, p in dist:
                        rows.append(row)
                        cols.append(local[t])
                        data.append(p)
                    row += 1
        matrix = sparse.csr_matrix((data, (rows, cols)), shape=(row, len(states)))
        return cls(states, matrix, np.array(choice_starts), np.array(state_starts))

    def sweep(self, values: np.ndarray, goal: np.ndarray) -> np.ndarray:
        expected = self.matrix @ values
        per_choice = np.minimum.reduceat(expected, self.choice_starts)
        best = np.maximum.reduceat(per_choice, self.state_starts)
        return np.where(goal, 1.0, best)


def solve_reachability(
    game: GameMatrix,
    goal: np.ndarray,
    horizon: Optional[int],
    options: CheckOptions,
) -> tuple[np.ndarray, int, float]:
    """Value iteration from the goal indicator; returns (values, sweeps, residual)."""
    values = goal.astype(float)
    residual = 0.0
    if horizon is not None:
        for _ in range(horizon):
            updated = game.sweep(values, goal)
            residual = float(np.max(np.abs(updated - values), initial=0.0))
            values = updated
        return values, horizon, residual
    for sweeps in range(1, options.max_iter + 1):
        updated = game.sweep(values, goal)
        residual = float(np.max(np.abs(updated - values), initial=0.0))
        values = updated
        if residual < options.eps:
            logger.debug("value iteration converged after %d sweeps (residual %.2e)", sweeps, residual)
            return values, sweeps, residual
    raise ConvergenceError(residual, options.max_iter)


def reach_value(
    m: Model,
    coalition: Iterable[str],
    goal: Iterable[str],
    horizon: Optional[int] = None,
    options: Optional[CheckOptions] = None,
) -> ValueVector:
    """
    Coalition's maximal probability of reaching goal, per reachable state.

    With a horizon, exactly that many sweeps are done; otherwise iteration
    runs until the residual drops below options.eps.

    Raises:
        ConvergenceError: no convergence within options.max_iter sweeps
    """
    options = options or CheckOptions()
    agents = frozenset(coalition)
    unknown = agents - set(m.agents)
    if unknown:
        raise BindingError(f"agent {a}" for a in unknown)
    game = GameMatrix.build(m, agents, m.reachable_indices)
    goal_ids = set(goal)
    mask = np.array([m.states[int(s)].id in goal_ids for s in game.states], dtype=bool)
    values, iterations, residual = solve_reachability(game, mask, horizon, options)
    return ValueVector(
        values={m.states[int(s)].id: float(v) for s, v in zip(game.states, values)},
        iterations=iterations,
        residual=residual,
    )


class ProbabilisticChecker(StrategicChecker):
    """Full dispatch: adds probability-bounded coalitions."""

    def _coalition(self, f: fm.Coalition) -> set[int]:
        if not isinstance(f.bound, fm.ProbabilityBound):
            return super()._coalition(f)
        if not isinstance(f.body, (fm.Finally, fm.BoundedF)):
            raise UnsupportedConstructError(
                f"probability bounds support only F and F<=k bodies: {fm.to_text(f)}"
            )
        missing = [f"agent {a}" for a in f.agents if a not in self.model.agents]
        if missing:
            raise BindingError(missing)
        goal_states = self.sat(f.body.arg)
        game = GameMatrix.build(self.model, f.agents, self.universe)
        mask = np.isin(game.states, np.fromiter(goal_states, dtype=np.int64, count=len(goal_states)))
        horizon = f.body.k if isinstance(f.body, fm.BoundedF) else None
        values, _, _ = solve_reachability(game, mask, horizon, self.options)
        self.values[f] = {int(s): float(v) for s, v in zip(game.states, values)}
        threshold = float(f.bound.p) - self.options.eps_compare
        return {int(s) for s, v in zip(game.states, values) if v >= threshold}


def prob_eval(f: fm.Coalition, m: Model, options: Optional[CheckOptions] = None) -> Verdict:
    """Evaluate <<A>>[P>=p] F phi / F<=k phi; inner formulas use the full dispatch."""
    return ProbabilisticChecker(m, options).verdict(f)
