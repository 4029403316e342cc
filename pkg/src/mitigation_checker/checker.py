"""
Front end for checking formulas and requirements against a model.

Formulas are expanded (templates, then bounded quantifiers), their ONCE
operands are compiled into monitor bits, and evaluation goes through the
full checker chain.
"""

from __future__ import annotations

import logging
from typing import Iterable, Literal, Mapping, Optional, Union

from . import formula as fm
from .config import CheckOptions
from .expand import expand_macros, expand_quantifiers
from .model import Model, Strategy, augment_monitors
from .probabilistic import ProbabilisticChecker
from .temporal import Verdict, check_bindings

logger = logging.getLogger(__name__)

INFORMAL: Literal["informal"] = "informal"


def expand(f: fm.Formula, model: Optional[Model] = None) -> fm.Formula:
    domains = dict(model.features) if model is not None else {}
    return expand_quantifiers(expand_macros(f), domains)


def with_monitors(model: Model, formulas: Iterable[fm.Formula]) -> Model:
    """Augment model with one monitor per distinct ONCE operand not yet tracked."""
    operands: list[fm.Formula] = []
    for f in formulas:
        for op in fm.collect_once(f):
            if op not in operands and op not in model.monitors:
                operands.append(op)
    return augment_monitors(model, operands)


def evaluate(
    f: fm.Formula,
    model: Model,
    options: Optional[CheckOptions] = None,
    strategies: Optional[Mapping[str, Strategy]] = None,
) -> Verdict:
    """Evaluate an expanded formula on a model that already tracks its ONCE operands."""
    check_bindings(f, model)
    return ProbabilisticChecker(model, options, strategies).verdict(f)


def check_formula(
    f: fm.Formula,
    model: Model,
    options: Optional[CheckOptions] = None,
    strategies: Optional[Mapping[str, Strategy]] = None,
) -> Verdict:
    """Expand, compile ONCE, and evaluate f over the reachable states of model."""
    f = expand(f, model)
    check_bindings(f, model)
    return evaluate(f, with_monitors(model, [f]), options, strategies)


def check_requirement(
    r: fm.Requirement,
    model: Model,
    options: Optional[CheckOptions] = None,
    strategies: Optional[Mapping[str, Strategy]] = None,
) -> Union[Verdict, Literal["informal"]]:
    """
    Check one catalog or spec-file requirement.

    Informal requirements are reported as not checkable, without error.

    Raises:
        BindingError: the formula mentions atoms, features or agents the
            model does not have
    """
    if r.formula is None:
        return INFORMAL
    verdict = check_formula(r.formula, model, options, strategies)
    logger.info("%s: %s", r.id, verdict.outcome)
    return verdict
