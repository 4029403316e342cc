"""
Abstract syntax of the requirement logic.

Formulas are immutable, hashable dataclasses so that structural equality is
plain ``==`` and subformulas can key memo tables. The module also holds the
pretty-printer (the inverse of the parser), the ONCE collector and the
well-formedness checks shared by the parser and the checkers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal
from typing import Iterator, Literal, Optional, Union

from .errors import FormulaSemanticError

CmpOp = Literal["<", "<=", "=", ">=", ">"]
Term = Union[int, str]  # integer literal or name (bound variable, or agent in atom arguments)


# --- state formulas -------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    name: str
    args: tuple[Term, ...] = ()

    @property
    def key(self) -> str:
        """Name under which the atom appears in a model's labels."""
        if not self.args:
            return self.name
        return f"{self.name}({','.join(str(a) for a in self.args)})"


@dataclass(frozen=True)
class TrueF:
    pass


@dataclass(frozen=True)
class FalseF:
    pass


@dataclass(frozen=True)
class Not:
    arg: Formula


@dataclass(frozen=True)
class And:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class FeatureCmp:
    feature: str
    op: CmpOp
    rhs: Term


@dataclass(frozen=True)
class PathAll:
    body: PathBody


@dataclass(frozen=True)
class PathExists:
    body: PathBody


@dataclass(frozen=True)
class ProbabilityBound:
    p: Decimal


@dataclass(frozen=True)
class ComplexityBound:
    c: int


Bound = Union[ProbabilityBound, ComplexityBound]


@dataclass(frozen=True)
class Coalition:
    agents: frozenset[str]
    bound: Optional[Bound]
    body: PathBody


@dataclass(frozen=True)
class Knows:
    agent: str
    arg: Formula


@dataclass(frozen=True)
class Once:
    arg: Formula


@dataclass(frozen=True)
class Suppose:
    agent: str
    strategy: str
    arg: Formula


@dataclass(frozen=True)
class ForAll:
    var: str
    domain: Domain
    arg: Formula


@dataclass(frozen=True)
class Exists:
    var: str
    domain: Domain
    arg: Formula


@dataclass(frozen=True)
class Domain:
    """Finite integer range ``lo..hi`` or the name of a declared feature."""

    lo: Optional[int] = None
    hi: Optional[int] = None
    feature: Optional[str] = None


@dataclass(frozen=True)
class Macro:
    """Template application such as DIAG(a, phi); removed by expand_macros."""

    name: str
    agent: str
    arg: Formula


# --- path bodies ----------------------------------------------------------


@dataclass(frozen=True)
class Next:
    arg: Formula


@dataclass(frozen=True)
class Finally:
    arg: Formula


@dataclass(frozen=True)
class Globally:
    arg: Formula


@dataclass(frozen=True)
class Until:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class BoundedF:
    k: int
    arg: Formula


@dataclass(frozen=True)
class FG:
    arg: Formula


@dataclass(frozen=True)
class GF:
    arg: Formula


PathBody = Union[Next, Finally, Globally, Until, BoundedF, FG, GF]

Formula = Union[
    Atom, TrueF, FalseF, Not, And, Or, Implies, FeatureCmp,
    PathAll, PathExists, Coalition, Knows, Once, Suppose,
    ForAll, Exists, Macro,
]

TRUE = TrueF()
FALSE = FalseF()

_BOOLEAN = (Atom, TrueF, FalseF, Not, And, Or, Implies, FeatureCmp)


@dataclass(frozen=True)
class Requirement:
    """Catalog or spec-file entry; formula is present iff formalized."""

    id: str
    text: str
    status: Literal["formalized", "informal"]
    formula: Optional[Formula] = None
    note: str = ""
    section: str = ""
    line: int = field(default=0, compare=False)

    def __post_init__(self) -> None:
        if (self.status == "formalized") != (self.formula is not None):
            raise FormulaSemanticError(
                f"requirement {self.id}: status {self.status!r} does not match formula presence"
            )


# --- traversal ------------------------------------------------------------


def children(f: Formula | PathBody) -> tuple:
    """Direct sub-formulas (path bodies count as children of their owner)."""
    if isinstance(f, (Atom, TrueF, FalseF, FeatureCmp)):
        return ()
    if isinstance(f, (And, Or, Implies, Until)):
        return (f.left, f.right)
    if isinstance(f, (PathAll, PathExists, Coalition)):
        return (f.body,)
    return (f.arg,)


def walk(f: Formula | PathBody) -> Iterator[Formula | PathBody]:
    """Pre-order traversal, left to right."""
    yield f
    for child in children(f):
        yield from walk(child)


def node_count(f: Formula | PathBody) -> int:
    return sum(1 for _ in walk(f))


def is_boolean(f: Formula) -> bool:
    """True when f is a state predicate (no modal, past or strategic operator)."""
    return all(isinstance(g, _BOOLEAN) for g in walk(f))


def collect_once(f: Formula) -> list[Formula]:
    """Distinct ONCE operands in first-occurrence order."""
    seen: list[Formula] = []
    for g in walk(f):
        if isinstance(g, Once) and g.arg not in seen:
            seen.append(g.arg)
    return seen


def validate(f: Formula, bound_vars: frozenset[str] = frozenset()) -> list[str]:
    """Return invariant violations of f (empty when well-formed)."""
    problems: list[str] = []

    def visit(g, bound: frozenset[str]) -> None:
        if isinstance(g, Once) and not is_boolean(g.arg):
            problems.append(f"ONCE operand must be a state predicate, got {to_text(g.arg)}")
        if isinstance(g, Coalition) and g.bound is not None:
            if isinstance(g.bound, ProbabilityBound):
                if not Decimal(0) <= g.bound.p <= Decimal(1):
                    problems.append(f"probability bound {g.bound.p} outside [0,1]")
                if not isinstance(g.body, (Finally, BoundedF)):
                    problems.append("probability bound requires an F or F<=k body")
            else:
                if g.bound.c < 0:
                    problems.append(f"complexity bound {g.bound.c} is negative")
                if len(g.agents) != 1:
                    problems.append("complexity bound requires a singleton coalition")
                if not isinstance(g.body, (Finally, Globally, BoundedF)):
                    problems.append("complexity bound requires an F, G or F<=k body")
        if isinstance(g, BoundedF) and g.k < 0:
            problems.append(f"step bound {g.k} is negative")
        if isinstance(g, FeatureCmp) and isinstance(g.rhs, str) and g.rhs not in bound:
            problems.append(f"variable {g.rhs!r} is not bound by a quantifier")
        if isinstance(g, (ForAll, Exists)):
            bound = bound | {g.var}
        for child in children(g):
            visit(child, bound)

    visit(f, bound_vars)
    return problems


# --- printing -------------------------------------------------------------

# Binding strength: higher binds tighter.
_PREC_IMPL, _PREC_OR, _PREC_AND, _PREC_UNARY = 1, 2, 3, 4


def _agents_text(agents: frozenset[str]) -> str:
    return ",".join(sorted(agents, key=_agent_sort_key))


def _agent_sort_key(agent: str) -> tuple:
    return (0, int(agent), "") if agent.isdigit() else (1, 0, agent)


def _bound_text(bound: Optional[Bound]) -> str:
    if bound is None:
        return ""
    if isinstance(bound, ProbabilityBound):
        return f"[P>={format(bound.p, 'f')}]"
    return f"[compl<={bound.c}]"


def _domain_text(domain: Domain) -> str:
    if domain.feature is not None:
        return domain.feature
    return f"{domain.lo}..{domain.hi}"


def _path_text(body: PathBody) -> str:
    if isinstance(body, Next):
        return f"X {_text(body.arg, _PREC_UNARY)}"
    if isinstance(body, Finally):
        return f"F {_text(body.arg, _PREC_UNARY)}"
    if isinstance(body, Globally):
        return f"G {_text(body.arg, _PREC_UNARY)}"
    if isinstance(body, BoundedF):
        return f"F<={body.k} {_text(body.arg, _PREC_UNARY)}"
    if isinstance(body, FG):
        return f"F G {_text(body.arg, _PREC_UNARY)}"
    if isinstance(body, GF):
        return f"G F {_text(body.arg, _PREC_UNARY)}"
    return f"{_text(body.left, _PREC_UNARY)} U {_text(body.right, _PREC_UNARY)}"


def _text(f: Formula, context: int) -> str:
    if isinstance(f, Implies):
        text, prec = f"{_text(f.left, _PREC_OR)} -> {_text(f.right, _PREC_IMPL)}", _PREC_IMPL
    elif isinstance(f, (ForAll, Exists)):
        word = "forall" if isinstance(f, ForAll) else "exists"
        text = f"{word} {f.var} in {_domain_text(f.domain)} . {_text(f.arg, _PREC_IMPL)}"
        prec = _PREC_IMPL
    elif isinstance(f, Or):
        text, prec = f"{_text(f.left, _PREC_OR)} | {_text(f.right, _PREC_AND)}", _PREC_OR
    elif isinstance(f, And):
        text, prec = f"{_text(f.left, _PREC_AND)} & {_text(f.right, _PREC_UNARY)}", _PREC_AND
    else:
        return _unary_text(f)
    return f"({text})" if prec < context else text


def _unary_text(f: Formula) -> str:
    if isinstance(f, Atom):
        return f.key
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, FalseF):
        return "false"
    if isinstance(f, FeatureCmp):
        return f"{f.feature} {f.op} {f.rhs}"
    if isinstance(f, Not):
        return f"!{_text(f.arg, _PREC_UNARY)}"
    if isinstance(f, PathAll):
        return f"A {_path_text(f.body)}"
    if isinstance(f, PathExists):
        return f"E {_path_text(f.body)}"
    if isinstance(f, Coalition):
        return f"<<{_agents_text(f.agents)}>>{_bound_text(f.bound)} {_path_text(f.body)}"
    if isinstance(f, Knows):
        return f"K[{f.agent}] {_text(f.arg, _PREC_UNARY)}"
    if isinstance(f, Once):
        return f"ONCE {_text(f.arg, _PREC_UNARY)}"
    if isinstance(f, Suppose):
        return f"supp({f.agent}: {f.strategy}) {_text(f.arg, _PREC_UNARY)}"
    if isinstance(f, Macro):
        return f"{f.name}({f.agent}, {_text(f.arg, _PREC_IMPL)})"
    raise TypeError(f"not a formula: {f!r}")


def to_text(f: Formula) -> str:
    """Print f in the concrete syntax; parse(to_text(f)) == f."""
    return _text(f, _PREC_IMPL)
