"""
Shared test fixtures: small model builders, random generators and
brute-force oracles the checkers are compared against.
"""

import itertools
import random
from typing import Iterator

import numpy as np

from mitigation_checker import formula as fm
from mitigation_checker.model import Model, ModelFile, State, build_model


def model_from_dict(data: dict) -> Model:
    """Build and validate a model from the JSON file layout."""
    return build_model(ModelFile.model_validate(data))


def chain_model(labels: list[list[str]], edges: dict[int, list[int]], initial=(0,)) -> Model:
    """Single-agent model; the agent picks among the listed successors."""
    atoms = sorted({a for label in labels for a in label})
    states = [
        {"id": f"s{i}", "label": label, "local": {"x": f"s{i}"}}
        for i, label in enumerate(labels)
    ]
    transitions = [
        {"from": f"s{i}", "joint": {"x": f"to{t}"}, "to": f"s{t}"}
        for i, targets in edges.items() for t in targets
    ]
    return model_from_dict({
        "agents": ["x"],
        "atoms": atoms,
        "states": states,
        "initial": [f"s{i}" for i in initial],
        "transitions": transitions,
    })


# --- random models and formulas ---------------------------------------------------

AGENT_NAMES = ("a", "b", "c")
ATOMS = ("p", "q")


def random_game(
    rng: random.Random,
    n_states: int,
    n_agents: int,
    perfect_information: bool = False,
    max_actions: int = 2,
    observable: bool = False,
) -> Model:
    """
    Deterministic concurrent game with uniform action sets.

    Each agent's enabled actions depend only on its local token, so every
    model is valid input for the imperfect-information checker.
    """
    agents = AGENT_NAMES[:n_agents]
    tokens = {
        a: [f"t{s}" if perfect_information else rng.choice(("t0", "t1")) for s in range(n_states)]
        for a in agents
    }
    actions = {
        (a, tok): [f"m{k}" for k in range(rng.randint(1, max_actions))]
        for a in agents for tok in sorted(set(tokens[a]))
    }
    states, transitions = [], []
    for s in range(n_states):
        label = [p for p in ATOMS if rng.random() < 0.5]
        states.append({"id": f"s{s}", "label": label, "local": {a: tokens[a][s] for a in agents}})
        per_agent = [actions[(a, tokens[a][s])] for a in agents]
        targets = rng.sample(range(n_states), min(n_states, rng.randint(1, 2)))
        for joint in itertools.product(*per_agent):
            transitions.append({
                "from": f"s{s}",
                "joint": dict(zip(agents, joint)),
                "to": f"s{rng.choice(targets)}",
            })
    return model_from_dict({
        "agents": list(agents),
        "atoms": list(ATOMS),
        "states": states,
        "initial": ["s0"],
        "transitions": transitions,
        # only consistent with the tokens under perfect information
        "observable": {agents[0]: list(ATOMS)} if observable else {},
    })


def random_markov_chain(rng: random.Random, n_states: int) -> Model:
    """One agent with a single action; every state is initial."""
    states, moves = [], []
    for s in range(n_states):
        states.append(State(f"s{s}", frozenset({"goal"} if rng.random() < 0.2 else ()), {}, {"x": "t"}))
        targets = rng.sample(range(n_states), rng.randint(1, min(3, n_states)))
        weights = [rng.random() + 0.05 for _ in targets]
        total = sum(weights)
        dist = {}
        for t, w in zip(targets, weights):
            dist[t] = dist.get(t, 0.0) + w / total
        moves.append({("go",): tuple(sorted(dist.items()))})
    return Model(
        agents=("x",),
        atoms=("goal",),
        features={},
        states=tuple(states),
        initial=frozenset(range(n_states)),
        transitions=tuple(moves),
        observable={},
    )


def random_mdp(rng: random.Random, n_states: int) -> Model:
    """One agent with one or two actions per state, each a random distribution."""
    states, moves = [], []
    for s in range(n_states):
        states.append(State(f"s{s}", frozenset({"goal"} if rng.random() < 0.25 else ()), {}, {"x": f"t{s}"}))
        per_action = {}
        for k in range(rng.randint(1, 2)):
            targets = rng.sample(range(n_states), rng.randint(1, min(3, n_states)))
            weights = [rng.random() + 0.05 for _ in targets]
            total = sum(weights)
            per_action[(f"m{k}",)] = tuple(sorted((t, w / total) for t, w in zip(targets, weights)))
        moves.append(per_action)
    return Model(
        agents=("x",),
        atoms=("goal",),
        features={},
        states=tuple(states),
        initial=frozenset(range(n_states)),
        transitions=tuple(moves),
        observable={},
    )


_BODIES = ("X", "F", "G", "U", "F<=", "FG", "GF")


def random_body(rng: random.Random, arg, coalition: bool = False):
    kinds = _BODIES[:5] if coalition else _BODIES
    kind = rng.choice(kinds)
    if kind == "X":
        return fm.Next(arg())
    if kind == "F":
        return fm.Finally(arg())
    if kind == "G":
        return fm.Globally(arg())
    if kind == "U":
        return fm.Until(arg(), arg())
    if kind == "F<=":
        return fm.BoundedF(rng.randint(0, 3), arg())
    if kind == "FG":
        return fm.FG(arg())
    return fm.GF(arg())


def random_formula(rng: random.Random, agents, depth: int) -> fm.Formula:
    """Temporal/epistemic formula over p and q."""
    if depth == 0 or rng.random() < 0.2:
        return rng.choice([fm.Atom("p"), fm.Atom("q"), fm.Atom("p"), fm.TRUE])

    def sub():
        return random_formula(rng, agents, depth - 1)

    kind = rng.randrange(8)
    if kind == 0:
        return fm.Not(sub())
    if kind == 1:
        return fm.And(sub(), sub())
    if kind == 2:
        return fm.Or(sub(), sub())
    if kind == 3:
        return fm.Implies(sub(), sub())
    if kind == 4:
        return fm.Knows(rng.choice(agents), sub())
    if kind == 5:
        return fm.PathAll(random_body(rng, sub))
    return fm.PathExists(random_body(rng, sub))


def random_coalition_formula(rng: random.Random, agents, depth: int) -> fm.Coalition:
    """<<A>> body with a state-formula argument built from random_formula."""
    coalition = frozenset(a for a in agents if rng.random() < 0.5)
    return fm.Coalition(coalition, None, random_body(rng, lambda: random_formula(rng, agents, depth), True))


# --- temporal / epistemic oracle ---------------------------------------------------


def simple_lassos(succ, start: int) -> Iterator[tuple[list[int], int]]:
    """All lassos from start whose stem and loop visit no state twice: (states, loop index)."""
    path = [start]
    on_path = {start: 0}

    def extend() -> Iterator[tuple[list[int], int]]:
        for t in succ[path[-1]]:
            if t in on_path:
                yield list(path), on_path[t]
            else:
                on_path[t] = len(path)
                path.append(t)
                yield from extend()
                path.pop()
                del on_path[t]

    yield from extend()


def _positions(n: int, loop: int, count: int) -> list[int]:
    """First `count` positions of the unrolled lasso word."""
    result, i = [], 0
    for _ in range(count):
        result.append(i)
        i = i + 1 if i + 1 < n else loop
    return result


def lasso_satisfies(body, states: list[int], loop: int, sat) -> bool:
    n = len(states)
    first = sat(body.left) if isinstance(body, fm.Until) else sat(body.arg)
    word = [states[i] for i in _positions(n, loop, n + 1)]
    cycle = states[loop:]
    if isinstance(body, fm.Next):
        return word[1] in first
    if isinstance(body, fm.Finally):
        return any(s in first for s in states)
    if isinstance(body, fm.Globally):
        return all(s in first for s in states)
    if isinstance(body, fm.BoundedF):
        prefix = [states[i] for i in _positions(n, loop, body.k + 1)]
        return any(s in first for s in prefix)
    if isinstance(body, fm.FG):
        return all(s in first for s in cycle)
    if isinstance(body, fm.GF):
        return any(s in first for s in cycle)
    second = sat(body.right)
    for s in word[:n]:
        if s in second:
            return True
        if s not in first:
            return False
    return False


class TemporalOracle:
    """Brute-force satisfaction sets over the reachable states of one model."""

    def __init__(self, model: Model):
        self.model = model
        self.universe = set(model.reachable_indices)
        self.lassos = {s: list(simple_lassos(model.successors, s)) for s in self.universe}
        self._cache: dict = {}

    def sat(self, f: fm.Formula) -> set[int]:
        if f not in self._cache:
            self._cache[f] = self._sat(f)
        return self._cache[f]

    def _sat(self, f: fm.Formula) -> set[int]:
        universe, states = self.universe, self.model.states
        if isinstance(f, fm.Atom):
            return {s for s in universe if f.key in states[s].label}
        if isinstance(f, fm.TrueF):
            return set(universe)
        if isinstance(f, fm.FalseF):
            return set()
        if isinstance(f, fm.Not):
            return universe - self.sat(f.arg)
        if isinstance(f, fm.And):
            return self.sat(f.left) & self.sat(f.right)
        if isinstance(f, fm.Or):
            return self.sat(f.left) | self.sat(f.right)
        if isinstance(f, fm.Implies):
            return (universe - self.sat(f.left)) | self.sat(f.right)
        if isinstance(f, fm.Knows):
            inner = self.sat(f.arg)
            return {
                s for s in universe
                if all(t in inner for t in universe
                       if states[t].local[f.agent] == states[s].local[f.agent])
            }
        if isinstance(f, fm.PathExists):
            return {
                s for s in universe
                if any(lasso_satisfies(f.body, path, loop, self.sat) for path, loop in self.lassos[s])
            }
        if isinstance(f, fm.PathAll):
            return {
                s for s in universe
                if all(lasso_satisfies(f.body, path, loop, self.sat) for path, loop in self.lassos[s])
            }
        raise TypeError(f"oracle does not handle {type(f).__name__}")


# --- strategic oracle ----------------------------------------------------------------


def pruned_successors(model: Model, agent: str, choice: dict[int, str]) -> list[tuple[int, ...]]:
    """Successors when agent plays choice[state]; the other agents stay free."""
    a = model.agents.index(agent)
    succ: list[tuple[int, ...]] = [()] * len(model.states)
    for s, action in choice.items():
        succ[s] = tuple(sorted({
            t for joint, dist in model.transitions[s].items() if joint[a] == action
            for t, p in dist if p > 0
        }))
    return succ


def brute_force_control(model: Model, agent: str, target: set[int]) -> set[int]:
    """States from which some memoryless agent strategy makes every path reach target."""
    a = model.agents.index(agent)
    universe = sorted(model.reachable_indices)
    result: set[int] = set()
    for picks in itertools.product(*(model.enabled[s][a] for s in universe)):
        succ = pruned_successors(model, agent, dict(zip(universe, picks)))
        for s in universe:
            if s not in result and all(any(t in target for t in path) for path, _ in simple_lassos(succ, s)):
                result.add(s)
    return result


# --- probabilistic oracle ----------------------------------------------------------


def markov_reach_probabilities(model: Model, goal: set[int]) -> dict[int, float]:
    """Exact reachability probabilities of a Markov chain by a linear solve."""
    n = len(model.states)
    dist = [dict(next(iter(moves.values()))) for moves in model.transitions]
    can_reach = set(goal)
    changed = True
    while changed:
        changed = False
        for s in range(n):
            if s not in can_reach and any(t in can_reach for t in dist[s]):
                can_reach.add(s)
                changed = True
    unknown = sorted(can_reach - goal)
    values = {s: 0.0 for s in range(n)}
    values.update({s: 1.0 for s in goal})
    if unknown:
        pos = {s: i for i, s in enumerate(unknown)}
        a = np.eye(len(unknown))
        b = np.zeros(len(unknown))
        for s in unknown:
            for t, p in dist[s].items():
                if t in goal:
                    b[pos[s]] += p
                elif t in pos:
                    a[pos[s], pos[t]] -= p
        for s, v in zip(unknown, np.linalg.solve(a, b)):
            values[s] = float(v)
    return values


def mdp_max_reach(model: Model, goal: set[int]) -> dict[int, float]:
    """Maximal reachability per state over all memoryless deterministic policies."""
    n = len(model.states)
    best = {s: 0.0 for s in range(n)}
    for picks in itertools.product(*(sorted(moves) for moves in model.transitions)):
        chain = Model(
            agents=model.agents,
            atoms=model.atoms,
            features={},
            states=model.states,
            initial=model.initial,
            transitions=tuple({joint: model.transitions[s][joint]} for s, joint in enumerate(picks)),
            observable={},
        )
        for s, v in markov_reach_probabilities(chain, goal).items():
            best[s] = max(best[s], v)
    return best


# --- pareto oracle -------------------------------------------------------------------


def dominated(row, other) -> bool:
    return all(o >= r for o, r in zip(other, row)) and any(o > r for o, r in zip(other, row))


def brute_force_frontier(rows: list[list[float]]) -> list[int]:
    return [i for i, r in enumerate(rows) if not any(dominated(r, o) for o in rows)]
