"""
Explicit-state labelling for the temporal and epistemic fragment.

Satisfaction sets are computed over a fixed universe (by default the
reachable states). Path quantifiers use the usual backward fixpoints over a
TransitionGraph; the two compound bodies F G and G F use cycle analysis on
the graph's strongly connected components.
"""

from __future__ import annotations

import logging
from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

import networkx as nx

from . import formula as fm
from .config import CheckOptions
from .errors import BindingError, DispatchError
from .model import Model, Strategy, cyclic_states, holds, monitor_atom

logger = logging.getLogger(__name__)

TRUE_VERDICT = "true"
FALSE_VERDICT = "false"
UNKNOWN_VERDICT = "unknown-within-budget"


@dataclass(frozen=True)
class Verdict:
    formula: fm.Formula
    sat_states: frozenset[str]
    holds_initially: bool
    witness: Optional[tuple[str, ...]] = None
    unknown_states: frozenset[str] = frozenset()
    value: Optional[float] = None
    strategy: Optional[str] = None
    initial_unknown: bool = field(default=False, repr=False)

    @property
    def outcome(self) -> str:
        if self.initial_unknown:
            return UNKNOWN_VERDICT
        return TRUE_VERDICT if self.holds_initially else FALSE_VERDICT


@dataclass(frozen=True, eq=False)
class TransitionGraph:
    """Successor structure restricted to a universe closed under successors."""

    universe: frozenset[int]
    succ: Sequence[tuple[int, ...]]

    @classmethod
    def of(cls, model: Model, universe: Iterable[int]) -> "TransitionGraph":
        return cls(frozenset(universe), model.successors)

    @cached_property
    def pred(self) -> Mapping[int, tuple[int, ...]]:
        preds: dict[int, list[int]] = defaultdict(list)
        for s in sorted(self.universe):
            for t in self.succ[s]:
                preds[t].append(s)
        return {t: tuple(p) for t, p in preds.items()}

    @cached_property
    def cyclic(self) -> frozenset[int]:
        graph = nx.DiGraph()
        graph.add_nodes_from(self.universe)
        graph.add_edges_from((s, t) for s in self.universe for t in self.succ[s])
        return frozenset(cyclic_states(graph))


# --- fixpoints ----------------------------------------------------------------


def pre_exists(g: TransitionGraph, target: set[int]) -> set[int]:
    return {s for t in target for s in g.pred.get(t, ())}


def pre_all(g: TransitionGraph, target: set[int]) -> set[int]:
    return {s for s in g.universe if all(t in target for t in g.succ[s])}


def until_exists(g: TransitionGraph, hold: set[int], goal: set[int]) -> set[int]:
    result = set(goal)
    queue = deque(sorted(result))
    while queue:
        t = queue.popleft()
        for s in g.pred.get(t, ()):
            if s not in result and s in hold:
                result.add(s)
                queue.append(s)
    return result


def until_all(g: TransitionGraph, hold: set[int], goal: set[int]) -> set[int]:
    """Counter-based least fixpoint: a state joins once all its successors have."""
    result = set(goal)
    pending: dict[int, int] = {}
    queue = deque(sorted(result))
    while queue:
        t = queue.popleft()
        for s in g.pred.get(t, ()):
            if s in result or s not in hold:
                continue
            left = pending.get(s, len(g.succ[s])) - 1
            pending[s] = left
            if left == 0:
                result.add(s)
                queue.append(s)
    return result


def bounded_exists(g: TransitionGraph, goal: set[int], k: int) -> set[int]:
    result = set(goal)
    for _ in range(k):
        result = result | pre_exists(g, result)
    return result


def bounded_all(g: TransitionGraph, goal: set[int], k: int) -> set[int]:
    result = set(goal)
    for _ in range(k):
        result = result | pre_all(g, result)
    return result


def always_exists(g: TransitionGraph, hold: set[int]) -> set[int]:
    return set(g.universe) - until_all(g, set(g.universe), set(g.universe) - hold)


def always_all(g: TransitionGraph, hold: set[int]) -> set[int]:
    return set(g.universe) - until_exists(g, set(g.universe), set(g.universe) - hold)


def infinitely_often_exists(g: TransitionGraph, target: set[int]) -> set[int]:
    """E G F: some path visits target infinitely often (reaches a target state on a cycle)."""
    return until_exists(g, set(g.universe), target & g.cyclic)


def eventually_always_exists(g: TransitionGraph, hold: set[int]) -> set[int]:
    """E F G = E F (E G)."""
    return until_exists(g, set(g.universe), always_exists(g, hold))


def path_sat(g: TransitionGraph, universal: bool, body, operands: Sequence[set[int]]) -> set[int]:
    """Satisfaction set of A body / E body given the operand satisfaction sets."""
    U = set(g.universe)
    first = operands[0]
    if isinstance(body, fm.Next):
        return pre_all(g, first) if universal else pre_exists(g, first)
    if isinstance(body, fm.Finally):
        return until_all(g, U, first) if universal else until_exists(g, U, first)
    if isinstance(body, fm.Globally):
        return always_all(g, first) if universal else always_exists(g, first)
    if isinstance(body, fm.Until):
        second = operands[1]
        return until_all(g, first, second) if universal else until_exists(g, first, second)
    if isinstance(body, fm.BoundedF):
        return bounded_all(g, first, body.k) if universal else bounded_exists(g, first, body.k)
    if isinstance(body, fm.FG):
        if universal:
            return U - infinitely_often_exists(g, U - first)
        return eventually_always_exists(g, first)
    if isinstance(body, fm.GF):
        if universal:
            return U - eventually_always_exists(g, U - first)
        return infinitely_often_exists(g, first)
    raise DispatchError(f"not a path body: {body!r}")


def path_operands(body) -> tuple[fm.Formula, ...]:
    if isinstance(body, fm.Until):
        return (body.left, body.right)
    return (body.arg,)


def lasso(g: TransitionGraph, start: int, allowed: set[int]) -> tuple[int, ...]:
    """Follow the smallest successor inside `allowed` until a state repeats."""
    path = [start]
    seen = {start}
    current = start
    while True:
        nxt = next((t for t in g.succ[current] if t in allowed), None)
        if nxt is None:
            return tuple(path)
        path.append(nxt)
        if nxt in seen:
            return tuple(path)
        seen.add(nxt)
        current = nxt


# --- bindings -------------------------------------------------------------------


def missing_names(f: fm.Formula, model: Model) -> list[str]:
    """Atoms, features and agents mentioned by f but absent from the model."""
    atoms, agents = set(model.atoms), set(model.agents)
    missing = set()
    for g in fm.walk(f):
        if isinstance(g, fm.Atom) and g.key not in atoms:
            missing.add(f"atom {g.key}")
        elif isinstance(g, fm.FeatureCmp) and g.feature not in model.features:
            missing.add(f"feature {g.feature}")
        elif isinstance(g, (fm.Knows, fm.Suppose)) and g.agent not in agents:
            missing.add(f"agent {g.agent}")
        elif isinstance(g, fm.Coalition):
            missing.update(f"agent {a}" for a in g.agents - agents)
    return sorted(missing)


def check_bindings(f: fm.Formula, model: Model) -> None:
    missing = missing_names(f, model)
    if missing:
        raise BindingError(missing)


# --- checker --------------------------------------------------------------------


class TemporalEpistemicChecker:
    """
    Labels states of one model with the formulas that hold there.

    Subclasses extend the dispatch to coalition and strategy operators;
    nested checkers (for pruned models) are created with ``type(self)`` so
    they keep the full dispatch.
    """

    def __init__(
        self,
        model: Model,
        options: Optional[CheckOptions] = None,
        strategies: Optional[Mapping[str, Strategy]] = None,
        universe: Optional[Iterable[int]] = None,
    ):
        self.model = model
        self.options = options or CheckOptions()
        self.strategies = dict(strategies or {})
        self.universe = frozenset(model.reachable_indices if universe is None else universe)
        self.graph = TransitionGraph.of(model, self.universe)
        # coalition nodes whose strategy search was cut short
        self.truncated: set[fm.Formula] = set()
        self.strategy_notes: dict[fm.Formula, str] = {}
        self.values: dict[fm.Formula, dict[int, float]] = {}
        self._memo: dict[fm.Formula, frozenset[int]] = {}

    @property
    def incomplete(self) -> bool:
        return bool(self.truncated)

    # public -----------------------------------------------------------------

    def sat(self, f: fm.Formula) -> frozenset[int]:
        cached = self._memo.get(f)
        if cached is None:
            cached = frozenset(self._sat(f))
            self._memo[f] = cached
        return cached

    def verdict(self, f: fm.Formula) -> Verdict:
        """Evaluate f and package the result over the initial states."""
        check_bindings(f, self.model)
        sat = self.sat(f)
        initial = self.model.initial
        holds_initially = initial <= sat
        unknown: frozenset[int] = frozenset()
        if self.incomplete:
            unknown = self.universe if _truncated_negative(f, self.truncated) else self.universe - sat
        witness = None
        if not holds_initially and isinstance(f, fm.PathAll) and isinstance(f.body, fm.Finally):
            path = lasso(self.graph, min(initial - sat), set(self.universe - sat))
            witness = tuple(self.model.states[i].id for i in path)
        value = None
        if f in self.values:
            value = min(self.values[f].get(i, 0.0) for i in initial)
        return Verdict(
            formula=f,
            sat_states=frozenset(self.model.states[i].id for i in sat),
            holds_initially=holds_initially,
            witness=witness,
            unknown_states=frozenset(self.model.states[i].id for i in unknown),
            value=value,
            strategy=self.strategy_notes.get(f),
            initial_unknown=bool(initial & unknown),
        )

    # dispatch -----------------------------------------------------------------

    def _sat(self, f: fm.Formula) -> set[int]:
        U = self.universe
        if isinstance(f, fm.TrueF):
            return set(U)
        if isinstance(f, fm.FalseF):
            return set()
        if isinstance(f, (fm.Atom, fm.FeatureCmp)):
            states = self.model.states
            return {i for i in U if holds(f, states[i])}
        if isinstance(f, fm.Not):
            return set(U - self.sat(f.arg))
        if isinstance(f, fm.And):
            return set(self.sat(f.left) & self.sat(f.right))
        if isinstance(f, fm.Or):
            return set(self.sat(f.left) | self.sat(f.right))
        if isinstance(f, fm.Implies):
            return set((U - self.sat(f.left)) | self.sat(f.right))
        if isinstance(f, (fm.PathAll, fm.PathExists)):
            operands = [set(self.sat(g)) for g in path_operands(f.body)]
            return path_sat(self.graph, isinstance(f, fm.PathAll), f.body, operands)
        if isinstance(f, fm.Knows):
            return self._knows(f.agent, self.sat(f.arg))
        if isinstance(f, fm.Once):
            return self._once(f)
        if isinstance(f, fm.Coalition):
            return self._coalition(f)
        if isinstance(f, fm.Suppose):
            return self._suppose(f)
        raise DispatchError(
            f"{type(f).__name__} must be expanded before checking: {fm.to_text(f)}"
        )

    def _knows(self, agent: str, inner: frozenset[int]) -> set[int]:
        if agent not in self.model.agents:
            raise BindingError([f"agent {agent}"])
        classes: dict[str, list[int]] = defaultdict(list)
        for i in self.universe:
            classes[self.model.states[i].local[agent]].append(i)
        result: set[int] = set()
        for members in classes.values():
            if all(i in inner for i in members):
                result.update(members)
        return result

    def _once(self, f: fm.Once) -> set[int]:
        try:
            b = self.model.monitors.index(f.arg)
        except ValueError:
            raise DispatchError(
                f"ONCE {fm.to_text(f.arg)} has no monitor; augment the model first"
            ) from None
        return self._sat(fm.Atom(monitor_atom(b)))

    def _coalition(self, f: fm.Coalition) -> set[int]:
        raise DispatchError(
            f"coalition formula needs the strategic checker: {fm.to_text(f)}"
        )

    def _suppose(self, f: fm.Suppose) -> set[int]:
        raise DispatchError(
            f"supp formula needs the strategic checker: {fm.to_text(f)}"
        )


def _truncated_negative(f: fm.Formula, truncated: set[fm.Formula]) -> bool:
    """True if a truncated coalition occurs under an odd number of negations."""

    def visit(g, negative: bool) -> bool:
        if negative and g in truncated:
            return True
        if isinstance(g, fm.Not):
            return visit(g.arg, not negative)
        if isinstance(g, fm.Implies):
            return visit(g.left, not negative) or visit(g.right, negative)
        return any(visit(c, negative) for c in fm.children(g))

    return visit(f, False)


def eval_formula(f: fm.Formula, m: Model, options: Optional[CheckOptions] = None) -> Verdict:
    """
    Evaluate a temporal/epistemic formula over the reachable states of m.

    Raises:
        DispatchError: f contains coalition or supp operators, or a ONCE
            without a monitor bit
        BindingError: f mentions names the model lacks
    """
    return TemporalEpistemicChecker(m, options).verdict(f)
