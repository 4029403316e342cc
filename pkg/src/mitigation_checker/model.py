"""
Explicit-state concurrent game structures with local states.

A Model is immutable once built: loading, monitor augmentation and strategy
pruning all return new models. Internally states are addressed by their
position in ``Model.states``; the public helpers speak state ids.
"""

from __future__ import annotations

import itertools
import json
import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence, Union

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from . import formula as fm
from .errors import (
    BindingError,
    DeadlockError,
    FormulaSemanticError,
    ModelFormatError,
    ModelValidationError,
    StrategyError,
)

logger = logging.getLogger(__name__)

PROB_TOLERANCE = 1e-9
MONITOR_PREFIX = "__once_"

JointAction = tuple[str, ...]  # one action per agent, in Model.agents order
Distribution = tuple[tuple[int, float], ...]  # (state index, probability)


# --- file schema ----------------------------------------------------------


class TargetSpec(BaseModel):
    state: str
    prob: float = Field(ge=0.0)


class TransitionSpec(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    source: str = Field(alias="from")
    joint: dict[str, str]
    to: Union[str, list[TargetSpec]]


class StateSpec(BaseModel):
    id: str
    label: list[str] = []
    features: dict[str, int] = {}
    local: dict[str, str] = {}


class ModelFile(BaseModel):
    """JSON layout of a model file."""

    agents: list[str]
    atoms: list[str] = []
    features: dict[str, int] = {}
    states: list[StateSpec]
    initial: list[str]
    transitions: list[TransitionSpec]
    observable: dict[str, list[str]] = {}


# --- runtime types --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class State:
    id: str
    label: frozenset[str]
    features: Mapping[str, int]
    local: Mapping[str, str]


@dataclass(frozen=True, eq=False)
class Strategy:
    """Memoryless uniform strategy: the agent's local token picks the action."""

    id: str
    agent: str
    choice: Mapping[str, str]


@dataclass(frozen=True)
class Component:
    states: tuple[str, ...]
    cyclic: bool


@dataclass(frozen=True, eq=False)
class Model:
    agents: tuple[str, ...]
    atoms: tuple[str, ...]
    features: Mapping[str, int]
    states: tuple[State, ...]
    initial: frozenset[int]
    transitions: tuple[Mapping[JointAction, Distribution], ...]
    observable: Mapping[str, frozenset[str]]
    monitors: tuple[fm.Formula, ...] = field(default=())

    @cached_property
    def index(self) -> dict[str, int]:
        return {s.id: i for i, s in enumerate(self.states)}

    @cached_property
    def successors(self) -> tuple[tuple[int, ...], ...]:
        """Distinct positive-probability successors of each state, sorted."""
        return tuple(
            tuple(sorted({t for dist in moves.values() for t, p in dist if p > 0}))
            for moves in self.transitions
        )

    @cached_property
    def predecessors(self) -> tuple[tuple[int, ...], ...]:
        preds: list[list[int]] = [[] for _ in self.states]
        for s, succ in enumerate(self.successors):
            for t in succ:
                preds[t].append(s)
        return tuple(tuple(p) for p in preds)

    @cached_property
    def enabled(self) -> tuple[tuple[tuple[str, ...], ...], ...]:
        """Per state, per agent (in agent order): sorted enabled actions."""
        result = []
        for moves in self.transitions:
            per_agent = [sorted({joint[i] for joint in moves}) for i in range(len(self.agents))]
            result.append(tuple(tuple(a) for a in per_agent))
        return tuple(result)

    @cached_property
    def reachable_indices(self) -> frozenset[int]:
        seen = set(self.initial)
        queue = deque(sorted(self.initial))
        succ = self.successors
        while queue:
            s = queue.popleft()
            for t in succ[s]:
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
        return frozenset(seen)

    @property
    def num_transitions(self) -> int:
        return sum(len(moves) for moves in self.transitions)

    @cached_property
    def is_deterministic(self) -> bool:
        """True when every distribution is a point distribution."""
        return all(len(dist) == 1 for moves in self.transitions for dist in moves.values())

    def agent_index(self, agent: str) -> int:
        try:
            return self.agents.index(agent)
        except ValueError:
            raise BindingError([f"agent {agent}"]) from None

    def state_ids(self, indices: Iterable[int]) -> list[str]:
        return [self.states[i].id for i in sorted(indices)]

    def digest(self) -> dict[str, int]:
        return {
            "states": len(self.states),
            "reachable": len(self.reachable_indices),
            "transitions": self.num_transitions,
        }


# --- predicates -----------------------------------------------------------

_CMP = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    "=": lambda a, b: a == b,
    ">=": lambda a, b: a >= b,
    ">": lambda a, b: a > b,
}


def holds(f: fm.Formula, state: State) -> bool:
    """Evaluate a boolean state predicate at one state."""
    if isinstance(f, fm.Atom):
        return f.key in state.label
    if isinstance(f, fm.TrueF):
        return True
    if isinstance(f, fm.FalseF):
        return False
    if isinstance(f, fm.FeatureCmp):
        if f.feature not in state.features:
            raise BindingError([f"feature {f.feature}"])
        if isinstance(f.rhs, str):
            raise FormulaSemanticError(f"variable {f.rhs!r} is not bound by a quantifier")
        return _CMP[f.op](state.features[f.feature], f.rhs)
    if isinstance(f, fm.Not):
        return not holds(f.arg, state)
    if isinstance(f, fm.And):
        return holds(f.left, state) and holds(f.right, state)
    if isinstance(f, fm.Or):
        return holds(f.left, state) or holds(f.right, state)
    if isinstance(f, fm.Implies):
        return (not holds(f.left, state)) or holds(f.right, state)
    raise FormulaSemanticError(f"not a state predicate: {fm.to_text(f)}")


# --- construction and validation -------------------------------------------


def _normalize(dist: Sequence[tuple[int, float]], subject: str) -> Distribution:
    merged: dict[int, float] = {}
    for t, p in dist:
        merged[t] = merged.get(t, 0.0) + p
    total = sum(merged.values())
    if abs(total - 1.0) > PROB_TOLERANCE:
        raise ModelValidationError("distribution sum", subject, f"probabilities sum to {total:g}")
    return tuple((t, p / total) for t, p in sorted(merged.items()) if p > 0)


def validate_model(m: Model) -> None:
    """Raise ModelValidationError naming the first violated invariant."""
    if not m.initial:
        raise ModelValidationError("nonempty initial set", "model")
    atoms = set(m.atoms)
    for state in m.states:
        subject = f"state {state.id!r}"
        unknown = state.label - atoms
        if unknown:
            raise ModelValidationError("declared atoms", subject, f"undeclared {sorted(unknown)}")
        for feature, top in m.features.items():
            value = state.features.get(feature)
            if value is None or not 0 <= value <= top:
                raise ModelValidationError(
                    "feature domain", subject, f"{feature}={value} outside 0..{top}"
                )
        missing = [a for a in m.agents if a not in state.local]
        if missing:
            raise ModelValidationError("local state", subject, f"no local token for {missing}")

    for s, moves in enumerate(m.transitions):
        subject = f"state {m.states[s].id!r}"
        if not moves:
            raise ModelValidationError("seriality", subject, "no enabled joint action")
        expected = set(itertools.product(*m.enabled[s]))
        if expected != set(moves):
            absent = sorted(expected - set(moves))[0]
            raise ModelValidationError(
                "product closure", subject, f"joint action {dict(zip(m.agents, absent))} missing"
            )

    for agent, observed in m.observable.items():
        if agent not in m.agents:
            raise ModelValidationError("observability", f"agent {agent!r}", "not a model agent")
        classes: dict[str, State] = {}
        for state in m.states:
            token = state.local[agent]
            other = classes.setdefault(token, state)
            diff = sorted((state.label ^ other.label) & observed)
            if diff:
                raise ModelValidationError(
                    "observability",
                    f"states {other.id!r}/{state.id!r}",
                    f"agent {agent} sees {diff[0]} differ under local state {token!r}",
                )


def build_model(spec: ModelFile) -> Model:
    ids = [s.id for s in spec.states]
    index = {sid: i for i, sid in enumerate(ids)}
    if len(index) != len(ids):
        dup = next(sid for sid in ids if ids.count(sid) > 1)
        raise ModelValidationError("unique state ids", f"state {dup!r}")

    def lookup(sid: str, context: str) -> int:
        if sid not in index:
            raise ModelValidationError("known states", context, f"unknown state {sid!r}")
        return index[sid]

    agents = tuple(spec.agents)
    moves: list[dict[JointAction, Distribution]] = [{} for _ in ids]
    for tr in spec.transitions:
        s = lookup(tr.source, "transition")
        subject = f"transition from {tr.source!r} on {tr.joint}"
        if set(tr.joint) != set(agents):
            raise ModelValidationError("joint action", subject, "must name one action per agent")
        joint = tuple(tr.joint[a] for a in agents)
        if joint in moves[s]:
            raise ModelValidationError("unique transitions", subject, "duplicate joint action")
        targets = [(tr.to, 1.0)] if isinstance(tr.to, str) else [(t.state, t.prob) for t in tr.to]
        moves[s][joint] = _normalize([(lookup(t, subject), p) for t, p in targets], subject)

    states = tuple(
        State(s.id, frozenset(s.label), dict(s.features), dict(s.local)) for s in spec.states
    )
    model = Model(
        agents=agents,
        atoms=tuple(spec.atoms),
        features=dict(spec.features),
        states=states,
        initial=frozenset(lookup(i, "initial") for i in spec.initial),
        transitions=tuple(moves),
        observable={a: frozenset(obs) for a, obs in spec.observable.items()},
    )
    validate_model(model)
    return model


def load_model(source: str) -> Model:
    """
    Load and validate a model from its JSON text.

    Raises:
        ModelFormatError: malformed JSON or wrong shape
        ModelValidationError: an invariant is violated (named in the message)
    """
    try:
        spec = ModelFile.model_validate(json.loads(source))
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(p) for p in first["loc"])
        raise ModelFormatError(f"{where}: {first['msg']}") from None
    model = build_model(spec)
    logger.info(
        "loaded model: %d agents, %d states, %d transitions",
        len(model.agents), len(model.states), model.num_transitions,
    )
    return model


def model_to_dict(m: Model) -> dict:
    """Inverse of load_model (point distributions use the shorthand)."""
    transitions = []
    for s, moves in enumerate(m.transitions):
        for joint, dist in moves.items():
            if len(dist) == 1:
                to: Union[str, list] = m.states[dist[0][0]].id
            else:
                to = [{"state": m.states[t].id, "prob": p} for t, p in dist]
            transitions.append({"from": m.states[s].id, "joint": dict(zip(m.agents, joint)), "to": to})
    return {
        "agents": list(m.agents),
        "atoms": list(m.atoms),
        "features": dict(m.features),
        "states": [
            {"id": s.id, "label": sorted(s.label), "features": dict(s.features), "local": dict(s.local)}
            for s in m.states
        ],
        "initial": m.state_ids(m.initial),
        "transitions": transitions,
        "observable": {a: sorted(obs) for a, obs in m.observable.items()},
    }


# --- graph utilities --------------------------------------------------------


def reachable(m: Model) -> frozenset[str]:
    """Ids of states reachable from the initial set."""
    return frozenset(m.states[i].id for i in m.reachable_indices)


def transition_graph(m: Model, nodes: Optional[Iterable[int]] = None) -> nx.DiGraph:
    """Positive-probability edge graph over state indices."""
    keep = set(range(len(m.states))) if nodes is None else set(nodes)
    graph = nx.DiGraph()
    graph.add_nodes_from(sorted(keep))
    graph.add_edges_from((s, t) for s in sorted(keep) for t in m.successors[s] if t in keep)
    return graph


def cyclic_states(graph: nx.DiGraph) -> set[int]:
    """States lying on some cycle of the graph."""
    result: set[int] = set()
    for component in nx.strongly_connected_components(graph):
        if len(component) > 1:
            result |= component
        else:
            (node,) = component
            if graph.has_edge(node, node):
                result.add(node)
    return result


def scc_decomposition(m: Model) -> list[Component]:
    """
    Strongly connected components in reverse topological order.

    Sink components come first; every edge between distinct components
    points from a later component to an earlier one.
    """
    graph = transition_graph(m)
    condensed = nx.condensation(graph)
    members = nx.get_node_attributes(condensed, "members")
    order = list(nx.lexicographical_topological_sort(condensed, key=lambda c: min(members[c])))
    components = []
    for c in reversed(order):
        nodes = sorted(members[c])
        cyclic = len(nodes) > 1 or graph.has_edge(nodes[0], nodes[0])
        components.append(Component(tuple(m.states[i].id for i in nodes), cyclic))
    return components


# --- monitor augmentation ---------------------------------------------------


def monitor_atom(index: int) -> str:
    return f"{MONITOR_PREFIX}{index}"


def augment_monitors(m: Model, once_operands: Sequence[fm.Formula]) -> Model:
    """
    Product of m with one sticky bit per ONCE operand.

    Bit b is set in an augmented state iff operand b held somewhere on the
    history up to and including the current state. Only reachable
    (state, bits) combinations are built. Local states are unchanged, so
    the bits stay unobservable.
    """
    if not once_operands:
        return m
    for operand in once_operands:
        if not fm.is_boolean(operand):
            raise FormulaSemanticError(f"ONCE operand is not a state predicate: {fm.to_text(operand)}")

    offset = len(m.monitors)
    truth = [
        sum(1 << b for b, op in enumerate(once_operands) if holds(op, state))
        for state in m.states
    ]
    width = len(once_operands)

    def key(s: int, bits: int) -> str:
        return f"{m.states[s].id}#{bits:0{width}b}"

    index: dict[tuple[int, int], int] = {}
    order: list[tuple[int, int]] = []
    queue: deque[tuple[int, int]] = deque()

    def visit(node: tuple[int, int]) -> int:
        if node not in index:
            index[node] = len(order)
            order.append(node)
            queue.append(node)
        return index[node]

    initial = frozenset(visit((s, truth[s])) for s in sorted(m.initial))
    moves: list[dict[JointAction, Distribution]] = []
    while queue:
        s, bits = queue.popleft()
        out: dict[JointAction, Distribution] = {}
        for joint, dist in m.transitions[s].items():
            out[joint] = tuple((visit((t, bits | truth[t])), p) for t, p in dist)
        moves.append(out)

    states = []
    for s, bits in order:
        base = m.states[s]
        extra = {monitor_atom(offset + b) for b in range(width) if bits >> b & 1}
        states.append(State(key(s, bits), base.label | extra, base.features, base.local))

    augmented = Model(
        agents=m.agents,
        atoms=m.atoms + tuple(monitor_atom(offset + b) for b in range(width)),
        features=m.features,
        states=tuple(states),
        initial=initial,
        transitions=tuple(moves),
        observable=m.observable,
        monitors=m.monitors + tuple(once_operands),
    )
    logger.info("added %d monitor bits: %d -> %d states", width, len(m.states), len(states))
    return augmented


# --- strategy pruning -------------------------------------------------------


def apply_strategy(m: Model, s: Strategy) -> Model:
    """
    Keep only transitions where s.agent plays s.choice[local token].

    Raises:
        StrategyError: unknown agent, or a reachable local token without a choice
        DeadlockError: pruning leaves some state without transitions
    """
    if s.agent not in m.agents:
        raise StrategyError(f"strategy {s.id!r}: unknown agent {s.agent!r}")
    a = m.agents.index(s.agent)
    reach = m.reachable_indices
    moves: list[Mapping[JointAction, Distribution]] = []
    for i, (state, out) in enumerate(zip(m.states, m.transitions)):
        token = state.local[s.agent]
        if token not in s.choice:
            if i in reach:
                raise StrategyError(
                    f"strategy {s.id!r} has no choice for local state {token!r} of agent {s.agent}"
                )
            moves.append(out)
            continue
        action = s.choice[token]
        kept = {joint: dist for joint, dist in out.items() if joint[a] == action}
        if not kept:
            raise DeadlockError(
                state.id, f"strategy {s.id!r} picks disabled action {action!r} for agent {s.agent}"
            )
        moves.append(kept)
    return Model(
        agents=m.agents,
        atoms=m.atoms,
        features=m.features,
        states=m.states,
        initial=m.initial,
        transitions=tuple(moves),
        observable=m.observable,
        monitors=m.monitors,
    )
