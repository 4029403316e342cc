"""
Coalition operators and strategy assumptions.

IR mode uses controllable-predecessor fixpoints. ir mode enumerates the
coalition's uniform memoryless strategies, prunes the model to each one and
checks the body universally on the result. Complexity-bounded coalitions
enumerate natural strategies (guarded rule lists over observable atoms).
Outcomes of nature are treated adversarially in all qualitative modes.
"""

from __future__ import annotations

import itertools
import json
import logging
from collections import defaultdict, deque
from dataclasses import dataclass
from functools import reduce
from typing import Iterator, Mapping, Optional, Sequence

from pydantic import BaseModel, ValidationError

from . import formula as fm
from .config import CheckMode, CheckOptions
from .errors import (
    BindingError,
    DispatchError,
    ModelFormatError,
    StrategyError,
    UnsupportedConstructError,
)
from .model import Model, Strategy, apply_strategy
from .temporal import TemporalEpistemicChecker, TransitionGraph, Verdict, path_operands, path_sat

logger = logging.getLogger(__name__)

# per state: [(coalition projection, [successor support per completing joint action])]
Moves = dict[int, list[tuple[tuple[str, ...], list[tuple[int, ...]]]]]


# --- natural strategies ------------------------------------------------------------


def guard_literals(guard: fm.Formula) -> list[tuple[str, bool]]:
    """(atom key, polarity) pairs of a conjunctive guard; `true` has none."""
    if isinstance(guard, fm.TrueF):
        return []
    if isinstance(guard, fm.And):
        return guard_literals(guard.left) + guard_literals(guard.right)
    if isinstance(guard, fm.Atom):
        return [(guard.key, True)]
    if isinstance(guard, fm.Not) and isinstance(guard.arg, fm.Atom):
        return [(guard.arg.key, False)]
    raise StrategyError(f"guard is not a conjunction of literals: {fm.to_text(guard)}")


@dataclass(frozen=True)
class NaturalStrategy:
    """Ordered rule list; the first rule whose guard holds picks the action."""

    agent: str
    rules: tuple[tuple[fm.Formula, str], ...]

    def __post_init__(self) -> None:
        if not self.rules or self.rules[-1][0] != fm.TRUE:
            raise StrategyError("the last rule of a natural strategy must have guard `true`")
        for guard, _ in self.rules:
            guard_literals(guard)

    @property
    def complexity(self) -> int:
        return sum(max(1, len(guard_literals(guard))) for guard, _ in self.rules)

    def describe(self) -> str:
        return "; ".join(f"{fm.to_text(guard)} -> {action}" for guard, action in self.rules)

    def choose(self, valuation: Mapping[str, bool]) -> str:
        for guard, action in self.rules:
            if all(valuation.get(atom, False) == positive for atom, positive in guard_literals(guard)):
                return action
        raise StrategyError("no rule fires")  # unreachable: last guard is true


def _guards(observables: Sequence[str], max_literals: int) -> list[fm.Formula]:
    guards = []
    for size in range(1, min(max_literals, len(observables)) + 1):
        for atoms in itertools.combinations(observables, size):
            for signs in itertools.product((True, False), repeat=size):
                literals = [fm.Atom(a) if positive else fm.Not(fm.Atom(a)) for a, positive in zip(atoms, signs)]
                guards.append(reduce(fm.And, literals))
    return guards


def natural_candidates(
    agent: str,
    observables: Sequence[str],
    actions: Sequence[str],
    complexity: int,
    literal_budget: int,
    rule_budget: int,
) -> Iterator[NaturalStrategy]:
    """All rule lists within the budgets, unordered; duplicate guards are skipped."""
    guards = [(g, len(guard_literals(g))) for g in _guards(observables, literal_budget)]
    for n_rules in range(1, rule_budget + 1):
        for head in itertools.product(guards, repeat=n_rules - 1):
            if sum(size for _, size in head) + 1 > complexity:
                continue
            if len({g for g, _ in head}) < len(head):
                continue
            for acts in itertools.product(actions, repeat=n_rules):
                rules = tuple((g, a) for (g, _), a in zip(head, acts)) + ((fm.TRUE, acts[-1]),)
                yield NaturalStrategy(agent, rules)


# --- strategy tables ----------------------------------------------------------------


class StrategySpec(BaseModel):
    id: str
    agent: str
    choice: dict[str, str]


class StrategyTable(BaseModel):
    strategies: list[StrategySpec]


def load_strategies(source: str) -> dict[str, Strategy]:
    """Parse a strategy table file into strategies keyed by id."""
    try:
        table = StrategyTable.model_validate(json.loads(source))
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None
    except ValidationError as e:
        first = e.errors()[0]
        raise ModelFormatError(f"{'.'.join(str(p) for p in first['loc'])}: {first['msg']}") from None
    result: dict[str, Strategy] = {}
    for spec in table.strategies:
        if spec.id in result:
            raise StrategyError(f"duplicate strategy id {spec.id!r}")
        result[spec.id] = Strategy(spec.id, spec.agent, dict(spec.choice))
    return result


# --- checker -------------------------------------------------------------------------


class StrategicChecker(TemporalEpistemicChecker):
    """Adds <<A>> (IR, ir and complexity-bounded) and supp to the dispatch."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._moves: dict[frozenset[str], Moves] = {}

    # coalition dispatch -----------------------------------------------------------

    def _coalition(self, f: fm.Coalition) -> set[int]:
        missing = [f"agent {a}" for a in f.agents if a not in self.model.agents]
        if missing:
            raise BindingError(missing)
        if isinstance(f.bound, fm.ProbabilityBound):
            raise DispatchError(f"probability bound needs the probabilistic checker: {fm.to_text(f)}")
        if isinstance(f.body, (fm.FG, fm.GF)):
            raise UnsupportedConstructError(
                f"F G / G F bodies are not supported under a coalition: {fm.to_text(f)}"
            )
        operands = [set(self.sat(g)) for g in path_operands(f.body)]
        if isinstance(f.bound, fm.ComplexityBound):
            return self._natural(f, operands)
        if self.options.mode is CheckMode.ir:
            return self._uniform(f, operands)
        return self._fixpoint(f, operands)

    def coalition_moves(self, agents: frozenset[str]) -> Moves:
        """Group each state's joint actions by the coalition's projection."""
        moves = self._moves.get(agents)
        if moves is not None:
            return moves
        positions = [i for i, a in enumerate(self.model.agents) if a in agents]
        moves = {}
        for s in self.universe:
            groups: dict[tuple[str, ...], list[tuple[int, ...]]] = defaultdict(list)
            for joint, dist in self.model.transitions[s].items():
                groups[tuple(joint[i] for i in positions)].append(tuple(t for t, _ in dist))
            moves[s] = sorted(groups.items())
        self._moves[agents] = moves
        return moves

    def _fixpoint(self, f: fm.Coalition, operands: list[set[int]]) -> set[int]:
        moves = self.coalition_moves(f.agents)
        g, U, body = self.graph, set(self.universe), f.body

        def controls(s: int, target: set[int]) -> bool:
            return any(all(all(t in target for t in sup) for sup in group) for _, group in moves[s])

        def cpre(target: set[int]) -> set[int]:
            return {s for s in U if controls(s, target)}

        def until(hold: set[int], goal: set[int]) -> set[int]:
            result = set(goal)
            queue = deque(sorted(result))
            while queue:
                t = queue.popleft()
                for s in g.pred.get(t, ()):
                    if s not in result and s in hold and controls(s, result):
                        result.add(s)
                        queue.append(s)
            return result

        if isinstance(body, fm.Next):
            return cpre(operands[0])
        if isinstance(body, fm.Finally):
            return until(U, operands[0])
        if isinstance(body, fm.Until):
            return until(operands[0], operands[1])
        if isinstance(body, fm.BoundedF):
            result = set(operands[0])
            for _ in range(body.k):
                result |= cpre(result)
            return result
        # G: greatest fixpoint by removal
        result = set(operands[0])
        queue = deque(sorted(result))
        while queue:
            s = queue.popleft()
            if s in result and not controls(s, result):
                result.discard(s)
                queue.extend(p for p in g.pred.get(s, ()) if p in result)
        return result

    # strategy enumeration -----------------------------------------------------------

    def pruned_graph(self, choice: Mapping[str, Mapping[int, str]]) -> TransitionGraph:
        """Successors when each agent in `choice` plays choice[agent][state]."""
        positions = [(self.model.agents.index(a), per_state) for a, per_state in choice.items()]
        succ: list[tuple[int, ...]] = [()] * len(self.model.states)
        for s in self.universe:
            targets = set()
            for joint, dist in self.model.transitions[s].items():
                if all(joint[i] == per_state[s] for i, per_state in positions):
                    targets.update(t for t, _ in dist)
            succ[s] = tuple(sorted(targets))
        return TransitionGraph(self.universe, succ)

    def _uniform_domain(self, agent: str) -> list[tuple[str, tuple[str, ...], list[int]]]:
        """(token, enabled actions, states) per local token of agent, sorted by token."""
        a = self.model.agent_index(agent)
        by_token: dict[str, list[int]] = defaultdict(list)
        for s in sorted(self.universe):
            by_token[self.model.states[s].local[agent]].append(s)
        domain = []
        for token in sorted(by_token):
            states = by_token[token]
            actions = self.model.enabled[states[0]][a]
            for s in states[1:]:
                if self.model.enabled[s][a] != actions:
                    raise StrategyError(
                        f"agent {agent} has different actions in indistinguishable states "
                        f"{self.model.states[states[0]].id!r} and {self.model.states[s].id!r}"
                    )
            domain.append((token, actions, states))
        return domain

    def _uniform(self, f: fm.Coalition, operands: list[set[int]]) -> set[int]:
        agents = sorted(f.agents)
        slots = [(agent, token, actions, states) for agent in agents
                 for token, actions, states in self._uniform_domain(agent)]
        total = 1
        for _, _, actions, _ in slots:
            total *= len(actions)
        cap = self.options.max_candidates
        if total > cap:
            logger.warning("%d uniform strategies for %s exceed the cap %d", total, fm.to_text(f), cap)
        logger.debug("enumerating %d uniform strategies for %s", min(total, cap), fm.to_text(f))

        result: set[int] = set()
        U = set(self.universe)
        combos = itertools.islice(itertools.product(*(actions for _, _, actions, _ in slots)), cap)
        for picks in combos:
            choice: dict[str, dict[int, str]] = defaultdict(dict)
            for (agent, _, _, states), action in zip(slots, picks):
                for s in states:
                    choice[agent][s] = action
            won = path_sat(self.pruned_graph(choice), True, f.body, operands)
            if f not in self.strategy_notes and self.model.initial <= won:
                self.strategy_notes[f] = ", ".join(
                    f"{agent}[{token}]={action}" for (agent, token, _, _), action in zip(slots, picks)
                )
            result |= won
            if result == U:
                return result
        if total > cap:
            self.truncated.add(f)
        return result

    def _natural(self, f: fm.Coalition, operands: list[set[int]]) -> set[int]:
        if len(f.agents) != 1:
            raise UnsupportedConstructError("complexity bound requires a singleton coalition")
        (agent,) = f.agents
        c = f.bound.c
        opts = self.options
        observables = sorted(self.model.observable.get(agent, frozenset()) & set(self.model.atoms))
        a = self.model.agent_index(agent)
        actions = sorted({act for s in self.universe for act in self.model.enabled[s][a]})
        valuations = {s: tuple(atom in self.model.states[s].label for atom in observables) for s in self.universe}
        reach_vals = set(valuations.values())

        candidates = list(itertools.islice(
            natural_candidates(agent, observables, actions, c, opts.literal_budget, opts.rule_budget),
            opts.max_candidates + 1,
        ))
        truncated = len(candidates) > opts.max_candidates
        candidates = sorted(candidates[: opts.max_candidates], key=lambda ns: (ns.complexity, ns.describe()))
        complete = (
            not truncated
            and opts.rule_budget >= min(c, len(reach_vals))
            and opts.literal_budget >= min(c - 1, len(observables))
        )
        logger.debug("%d natural strategies for %s (complete=%s)", len(candidates), fm.to_text(f), complete)

        seen: set[tuple] = set()
        result: set[int] = set()
        U = set(self.universe)
        for ns in candidates:
            picks = {v: ns.choose(dict(zip(observables, v))) for v in sorted(reach_vals)}
            key = tuple(sorted(picks.items()))
            if key in seen:
                continue
            seen.add(key)
            if any(picks[valuations[s]] not in self.model.enabled[s][a] for s in self.universe):
                continue
            graph = self.pruned_graph({agent: {s: picks[valuations[s]] for s in self.universe}})
            won = path_sat(graph, True, f.body, operands)
            if f not in self.strategy_notes and self.model.initial <= won:
                self.strategy_notes[f] = f"{agent}: {ns.describe()}"
            result |= won
            if result == U:
                return result
        if not complete:
            logger.warning("natural strategy enumeration for %s is incomplete", fm.to_text(f))
            self.truncated.add(f)
        return result

    def verify_natural(self, ns: NaturalStrategy, body) -> set[int]:
        """States from which every outcome of ns satisfies body."""
        a = self.model.agent_index(ns.agent)
        observable = self.model.observable.get(ns.agent, frozenset())
        for guard, action in ns.rules:
            hidden = [atom for atom, _ in guard_literals(guard) if atom not in observable]
            if hidden:
                raise StrategyError(f"guard mentions atoms {ns.agent} cannot observe: {hidden}")
        picks: dict[int, str] = {}
        for s in self.universe:
            state = self.model.states[s]
            action = ns.choose({atom: atom in state.label for atom in observable})
            if action not in self.model.enabled[s][a]:
                raise StrategyError(f"action {action!r} is not enabled in state {state.id!r}")
            picks[s] = action
        operands = [set(self.sat(g)) for g in path_operands(body)]
        return path_sat(self.pruned_graph({ns.agent: picks}), True, body, operands)

    # supp ---------------------------------------------------------------------------

    def _suppose(self, f: fm.Suppose) -> set[int]:
        strategy = self.strategies.get(f.strategy)
        if strategy is None:
            raise StrategyError(f"unknown strategy {f.strategy!r}")
        if strategy.agent != f.agent:
            raise StrategyError(f"strategy {f.strategy!r} belongs to {strategy.agent}, not {f.agent}")
        pruned = apply_strategy(self.model, strategy)
        nested = type(self)(pruned, self.options, self.strategies, universe=self.universe)
        inner = nested.sat(f.arg)
        self.truncated |= nested.truncated
        return set(inner)


def _with_mode(options: Optional[CheckOptions], mode: CheckMode) -> CheckOptions:
    return (options or CheckOptions()).model_copy(update={"mode": mode})


def atl_eval(
    f: fm.Coalition, m: Model, mode: CheckMode = CheckMode.IR, options: Optional[CheckOptions] = None
) -> Verdict:
    """Evaluate an unbounded coalition formula under IR or ir semantics."""
    return StrategicChecker(m, _with_mode(options, mode)).verdict(f)


def atl_eval_natural(f: fm.Coalition, m: Model, options: Optional[CheckOptions] = None) -> Verdict:
    """Evaluate <<a>>[compl<=c] body by natural strategy enumeration."""
    if not isinstance(f.bound, fm.ComplexityBound):
        raise UnsupportedConstructError("atl_eval_natural needs a complexity bound")
    return StrategicChecker(m, options).verdict(f)


def verify_natural_strategy(
    ns: NaturalStrategy, body, m: Model, options: Optional[CheckOptions] = None
) -> Verdict:
    """Check that a given natural strategy enforces body (a path body)."""
    checker = StrategicChecker(m, options)
    sat = checker.verify_natural(ns, body)
    f = fm.Coalition(frozenset({ns.agent}), fm.ComplexityBound(ns.complexity), body)
    return Verdict(
        formula=f,
        sat_states=frozenset(m.states[i].id for i in sat),
        holds_initially=m.initial <= sat,
        strategy=f"{ns.agent}: {ns.describe()}",
    )


def suppose_eval(
    f: fm.Suppose, m: Model, strategies: Mapping[str, Strategy], options: Optional[CheckOptions] = None
) -> Verdict:
    """Evaluate supp(agent: id) phi by checking phi on the pruned model."""
    return StrategicChecker(m, options, strategies).verdict(f)
