"""
Rewriting passes run before checking: template (macro) expansion and
bounded-quantifier expansion.
"""

from __future__ import annotations

from dataclasses import replace
from functools import reduce
from typing import Callable, Mapping

from . import formula as fm
from .errors import MacroError, QuantifierError


def diagnosability(agent: str, phi: fm.Formula) -> fm.Formula:
    """A G (!phi -> <<agent>> F K[agent] !phi)"""
    return fm.PathAll(fm.Globally(fm.Implies(
        fm.Not(phi),
        fm.Coalition(frozenset({agent}), None, fm.Finally(fm.Knows(agent, fm.Not(phi)))),
    )))


def resilience(agent: str, phi: fm.Formula) -> fm.Formula:
    """A G (!phi -> <<agent>> F phi)"""
    return fm.PathAll(fm.Globally(fm.Implies(
        fm.Not(phi),
        fm.Coalition(frozenset({agent}), None, fm.Finally(phi)),
    )))


MACROS: dict[str, Callable[[str, fm.Formula], fm.Formula]] = {
    "DIAG": diagnosability,
    "RESIL": resilience,
}


def _map_children(f, fn):
    """Rebuild f with fn applied to each direct sub-formula / path body."""
    if isinstance(f, (fm.Atom, fm.TrueF, fm.FalseF, fm.FeatureCmp)):
        return f
    if isinstance(f, (fm.And, fm.Or, fm.Implies, fm.Until)):
        return replace(f, left=fn(f.left), right=fn(f.right))
    if isinstance(f, (fm.PathAll, fm.PathExists, fm.Coalition)):
        return replace(f, body=fn(f.body))
    return replace(f, arg=fn(f.arg))


def expand_macros(f: fm.Formula) -> fm.Formula:
    """Replace every template application by its definition (bottom-up)."""
    if isinstance(f, fm.Macro):
        template = MACROS.get(f.name)
        if template is None:
            raise MacroError(f"unknown macro {f.name!r}")
        return template(f.agent, expand_macros(f.arg))
    return _map_children(f, expand_macros)


def _substitute(f, var: str, value: int):
    if isinstance(f, fm.FeatureCmp):
        return replace(f, rhs=value) if f.rhs == var else f
    if isinstance(f, fm.Atom):
        return replace(f, args=tuple(value if a == var else a for a in f.args))
    if isinstance(f, (fm.ForAll, fm.Exists)) and f.var == var:
        return f  # shadowed
    rebuilt = _map_children(f, lambda g: _substitute(g, var, value))
    agent = str(value)
    if isinstance(rebuilt, (fm.Knows, fm.Suppose, fm.Macro)) and rebuilt.agent == var:
        rebuilt = replace(rebuilt, agent=agent)
    if isinstance(rebuilt, fm.Coalition) and var in rebuilt.agents:
        rebuilt = replace(rebuilt, agents=(rebuilt.agents - {var}) | {agent})
    return rebuilt


def _domain_values(domain: fm.Domain, domains: Mapping[str, int]) -> range:
    if domain.feature is None:
        if domain.lo is None or domain.hi is None:
            raise QuantifierError("quantifier range must have both bounds")
        return range(domain.lo, domain.hi + 1)
    if domain.feature not in domains:
        raise QuantifierError(f"quantifier ranges over undeclared feature {domain.feature!r}")
    return range(0, domains[domain.feature] + 1)


def expand_quantifiers(f: fm.Formula, domains: Mapping[str, int] | None = None) -> fm.Formula:
    """
    Replace bounded quantifiers by finite conjunctions / disjunctions.

    Args:
        f: formula, possibly with forall/exists nodes
        domains: declared feature domains (feature name -> max value)

    Returns:
        An equivalent quantifier-free formula.

    Raises:
        QuantifierError: if a domain names an undeclared feature or a
            bound variable is left free.
    """
    domains = domains or {}
    if isinstance(f, (fm.ForAll, fm.Exists)):
        values = _domain_values(f.domain, domains)
        instances = [expand_quantifiers(_substitute(f.arg, f.var, v), domains) for v in values]
        join = fm.And if isinstance(f, fm.ForAll) else fm.Or
        return reduce(join, instances)
    result = _map_children(f, lambda g: expand_quantifiers(g, domains))
    if isinstance(result, fm.FeatureCmp) and isinstance(result.rhs, str):
        raise QuantifierError(f"variable {result.rhs!r} is not bound by a quantifier")
    return result
