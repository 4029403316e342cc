"""
Generator for small epidemic-mitigation models.

Agents are the health authority ``a`` and citizens ``"1"`` .. ``"n"``. Each
citizen moves through the health chain S -> E -> I -> R. An environment agent
``env`` picks at most one contact per step among the contact-graph edges
that could transmit; it sees the whole global state. The authority learns
about citizens through positive tests (app users only, when testing is on)
and through contact tracing between two app users, and may notify known
citizens. Notified citizens may isolate.
"""

from __future__ import annotations

import itertools
import logging
from collections import deque
from dataclasses import dataclass
from typing import Literal, Optional, Union

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .errors import StateSpaceError
from .model import Distribution, JointAction, Model, State, Strategy, validate_model

logger = logging.getLogger(__name__)

AUTHORITY = "a"
ENVIRONMENT = "env"
MAX_STATES = 200_000

SUSCEPTIBLE, EXPOSED, INFECTED, RECOVERED = range(4)

WAIT = "wait"
NO_CONTACT = "none"
ISOLATE = "isolate"


class ScenarioParams(BaseModel):
    """Generator parameters; citizens are numbered from 1."""

    model_config = ConfigDict(frozen=True)

    n_citizens: int = Field(default=2, ge=1, le=4)
    adoption: Optional[tuple[bool, ...]] = None  # None: everybody uses the app
    contact_graph: Union[Literal["complete", "ring"], tuple[tuple[int, int], ...]] = "complete"
    testing: bool = True
    notify_reliability: float = Field(default=1.0, ge=0.0, le=1.0)
    initial_exposed: frozenset[int] = frozenset({1})
    max_states: int = Field(default=MAX_STATES, ge=1)

    @field_validator("initial_exposed", mode="before")
    @classmethod
    def _to_frozenset(cls, value):
        return frozenset(value)

    @model_validator(mode="after")
    def _check_citizens(self) -> "ScenarioParams":
        citizens = set(range(1, self.n_citizens + 1))
        if self.adoption is not None and len(self.adoption) != self.n_citizens:
            raise ValueError(f"adoption needs {self.n_citizens} entries, got {len(self.adoption)}")
        if not self.initial_exposed <= citizens:
            raise ValueError(f"initial_exposed must be a subset of 1..{self.n_citizens}")
        if not isinstance(self.contact_graph, str):
            for u, v in self.contact_graph:
                if u not in citizens or v not in citizens or u == v:
                    raise ValueError(f"bad contact edge {u}-{v}")
        return self

    def adopted(self, i: int) -> bool:
        return True if self.adoption is None else self.adoption[i - 1]


@dataclass(frozen=True)
class ScenarioModel:
    model: Model
    atoms: dict[str, str]  # atom -> meaning
    strategies: dict[str, Strategy]
    params: ScenarioParams


@dataclass(frozen=True)
class _Global:
    health: tuple[int, ...]
    known: tuple[bool, ...]
    notified: tuple[bool, ...]
    quarantined: tuple[bool, ...]


def contact_edges(params: ScenarioParams) -> list[tuple[int, int]]:
    """Contact graph edges between citizens, as sorted pairs."""
    n = params.n_citizens
    if params.contact_graph == "complete":
        graph = nx.complete_graph(range(1, n + 1))
    elif params.contact_graph == "ring":
        graph = nx.cycle_graph(range(1, n + 1))
    else:
        graph = nx.Graph()
        graph.add_nodes_from(range(1, n + 1))
        graph.add_edges_from(params.contact_graph)
    return sorted({(min(u, v), max(u, v)) for u, v in graph.edges() if u != v})


def citizen_atoms(i: int, agents: list[str]) -> list[str]:
    names = [
        f"exposed_{i}", f"infected_{i}", f"recovered_{i}", f"known_{i}",
        f"tested_positive_{i}", f"notified_{i}", f"quarantined_{i}",
    ]
    return names + [f"access({j},{i})" for j in agents if j not in (str(i), ENVIRONMENT)]


def _authority_token(g: _Global, positive: list[bool]) -> str:
    return "|".join(
        ("k" if k else "-") + ("p" if p else "-") + ("n" if nt else "-")
        for k, p, nt in zip(g.known, positive, g.notified)
    )


def _citizen_token(notified: bool, quarantined: bool) -> str:
    return ("n" if notified else "-") + ("q" if quarantined else "-")


def generate(params: ScenarioParams) -> ScenarioModel:
    """
    Build the reachable part of the scenario model.

    Raises:
        StateSpaceError: more than params.max_states reachable states
    """
    n = params.n_citizens
    citizens = list(range(1, n + 1))
    agents = [AUTHORITY] + [str(i) for i in citizens] + [ENVIRONMENT]
    edges = contact_edges(params)
    reliability = params.notify_reliability

    def positive(g: _Global) -> list[bool]:
        return [params.testing and params.adopted(i) and g.health[i - 1] == INFECTED for i in citizens]

    def step(g: _Global, notify: Optional[int], success: bool, isolate: set[int],
             contact: Optional[tuple[int, int]]) -> _Global:
        pos = positive(g)
        health = list(g.health)
        known = list(g.known)
        for i in citizens:
            h = g.health[i - 1]
            if h in (EXPOSED, INFECTED):
                health[i - 1] = h + 1
            if pos[i - 1]:
                known[i - 1] = True
        if contact is not None:
            u, v = contact
            for x, y in ((u, v), (v, u)):
                if g.health[x - 1] == SUSCEPTIBLE and g.health[y - 1] == INFECTED:
                    health[x - 1] = EXPOSED
                if pos[y - 1] and params.adopted(x) and params.adopted(y):
                    known[x - 1] = True
        notified = list(g.notified)
        if notify is not None and success:
            notified[notify - 1] = True
        quarantined = [q or i in isolate for i, q in zip(citizens, g.quarantined)]
        return _Global(tuple(health), tuple(known), tuple(notified), tuple(quarantined))

    def contacts(g: _Global) -> list[tuple[int, int]]:
        return [
            (u, v) for u, v in edges
            if INFECTED in (g.health[u - 1], g.health[v - 1])
            and not g.quarantined[u - 1] and not g.quarantined[v - 1]
        ]

    def actions(g: _Global) -> list[list[str]]:
        authority = [WAIT] + [f"notify_{i}" for i in citizens if g.known[i - 1] and not g.notified[i - 1]]
        per_citizen = [
            [WAIT, ISOLATE] if g.notified[i - 1] and not g.quarantined[i - 1] else [WAIT]
            for i in citizens
        ]
        environment = [NO_CONTACT] + [f"meet_{u}_{v}" for u, v in contacts(g)]
        return [authority] + per_citizen + [environment]

    index: dict[_Global, int] = {}
    order: list[_Global] = []
    queue: deque[_Global] = deque()

    def visit(g: _Global) -> int:
        if g not in index:
            if len(order) >= params.max_states:
                raise StateSpaceError(len(order) + 1, params.max_states)
            index[g] = len(order)
            order.append(g)
            queue.append(g)
        return index[g]

    subsets = [
        set(c) for size in range(len(params.initial_exposed) + 1)
        for c in itertools.combinations(sorted(params.initial_exposed), size)
    ]
    blank = tuple(False for _ in citizens)
    initial = frozenset(
        visit(_Global(tuple(EXPOSED if i in s else SUSCEPTIBLE for i in citizens), blank, blank, blank))
        for s in subsets
    )

    moves: list[dict[JointAction, Distribution]] = []
    while queue:
        g = queue.popleft()
        out: dict[JointAction, Distribution] = {}
        for joint in itertools.product(*actions(g)):
            notify = int(joint[0].split("_")[1]) if joint[0] != WAIT else None
            isolate = {i for i, act in zip(citizens, joint[1:-1]) if act == ISOLATE}
            contact = None if joint[-1] == NO_CONTACT else tuple(int(x) for x in joint[-1].split("_")[1:])
            outcomes = [(True, reliability), (False, 1.0 - reliability)] if notify else [(True, 1.0)]
            dist: dict[int, float] = {}
            for success, p_success in outcomes:
                if p_success <= 0:
                    continue
                t = visit(step(g, notify, success, isolate, contact))
                dist[t] = dist.get(t, 0.0) + p_success
            out[tuple(joint)] = tuple(sorted(dist.items()))
        moves.append(out)

    states = tuple(_label(k, g, params, positive(g)) for k, g in enumerate(order))
    atoms = [a for i in citizens for a in citizen_atoms(i, agents)] + ["outbreak", "control_pandemic"]
    observable = {AUTHORITY: frozenset(
        a for i in citizens
        for a in (f"known_{i}", f"tested_positive_{i}", f"notified_{i}", f"access({AUTHORITY},{i})")
    )}
    for i in citizens:
        observable[str(i)] = frozenset({f"notified_{i}", f"quarantined_{i}"})

    model = Model(
        agents=tuple(agents),
        atoms=tuple(atoms),
        features={"num_infected": n},
        states=states,
        initial=initial,
        transitions=tuple(moves),
        observable=observable,
    )
    validate_model(model)
    logger.info("generated epidemic model: %d citizens, %d states", n, len(states))
    return ScenarioModel(model, atom_dictionary(citizens, agents), standard_strategies(n), params)


def _label(k: int, g: _Global, params: ScenarioParams, pos: list[bool]) -> State:
    label = set()
    for i, h in enumerate(g.health, start=1):
        if h == EXPOSED:
            label.add(f"exposed_{i}")
        elif h == INFECTED:
            label.add(f"infected_{i}")
        elif h == RECOVERED:
            label.add(f"recovered_{i}")
        if g.known[i - 1]:
            label.update({f"known_{i}", f"access({AUTHORITY},{i})"})
        if pos[i - 1]:
            label.add(f"tested_positive_{i}")
        if g.notified[i - 1]:
            label.add(f"notified_{i}")
        if g.quarantined[i - 1]:
            label.add(f"quarantined_{i}")
    infected = sum(h == INFECTED for h in g.health)
    if infected >= 2:
        label.add("outbreak")
    if infected == 0:
        label.add("control_pandemic")
    local = {AUTHORITY: _authority_token(g, pos), ENVIRONMENT: f"s{k}"}
    for i in range(1, params.n_citizens + 1):
        local[str(i)] = _citizen_token(g.notified[i - 1], g.quarantined[i - 1])
    return State(f"s{k}", frozenset(label), {"num_infected": infected}, local)


def atom_dictionary(citizens: list[int], agents: list[str]) -> dict[str, str]:
    meaning = {
        "outbreak": "at least two citizens are infectious",
        "control_pandemic": "no citizen is infectious",
    }
    for i in citizens:
        meaning.update({
            f"exposed_{i}": f"citizen {i} has been exposed and is incubating",
            f"infected_{i}": f"citizen {i} is infectious",
            f"recovered_{i}": f"citizen {i} has recovered",
            f"known_{i}": f"the authority has identified citizen {i} as exposed",
            f"tested_positive_{i}": f"citizen {i} currently tests positive through the app",
            f"notified_{i}": f"citizen {i} has been notified by the authority",
            f"quarantined_{i}": f"citizen {i} is in quarantine",
        })
        for j in agents:
            if j not in (str(i), ENVIRONMENT):
                meaning[f"access({j},{i})"] = f"{j} holds exposure data of citizen {i}"
    return meaning


def standard_strategies(n: int) -> dict[str, Strategy]:
    """`idle` never notifies; `notify_known` notifies the lowest known, unnotified citizen."""
    idle: dict[str, str] = {}
    notify_known: dict[str, str] = {}
    for flags in itertools.product(itertools.product((False, True), repeat=3), repeat=n):
        token = "|".join(("k" if k else "-") + ("p" if p else "-") + ("n" if nt else "-") for k, p, nt in flags)
        idle[token] = WAIT
        pending = [i for i, (k, _, nt) in enumerate(flags, start=1) if k and not nt]
        notify_known[token] = f"notify_{pending[0]}" if pending else WAIT
    return {
        "idle": Strategy("idle", AUTHORITY, idle),
        "notify_known": Strategy("notify_known", AUTHORITY, notify_known),
    }
