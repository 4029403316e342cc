"""
Batch checking of a spec file against a model, and the resulting report.
"""

from __future__ import annotations

import logging
from typing import Literal, Mapping, Optional

from pydantic import BaseModel

from . import formula as fm
from .checker import INFORMAL, evaluate, expand, with_monitors
from .config import CheckOptions
from .model import Model, Strategy, apply_strategy, load_model
from .pareto import ScoreRow, ScoreTable
from .parser import parse
from .temporal import TRUE_VERDICT, UNKNOWN_VERDICT, check_bindings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 2

VerdictText = Literal["true", "false", "informal", "unknown-within-budget"]


class ReportRow(BaseModel):
    id: str
    status: Literal["formalized", "informal"]
    verdict: VerdictText
    value: Optional[float] = None
    witness: Optional[list[str]] = None
    strategy: Optional[str] = None


class ModelDigest(BaseModel):
    states: int
    reachable: int
    transitions: int
    monitors: int = 0


class ConfigEcho(BaseModel):
    mode: str
    eps: float
    eps_compare: float
    max_iter: int
    literal_budget: int
    rule_budget: int
    max_candidates: int

    @classmethod
    def of(cls, options: CheckOptions) -> "ConfigEcho":
        return cls(
            mode=options.mode.value,
            eps=options.eps,
            eps_compare=options.eps_compare,
            max_iter=options.max_iter,
            literal_budget=options.literal_budget,
            rule_budget=options.rule_budget,
            max_candidates=options.max_candidates,
        )


class Report(BaseModel):
    """One row per requirement, in spec-file order."""

    rows: list[ReportRow]
    model: ModelDigest
    config: ConfigEcho

    @property
    def exit_status(self) -> int:
        formal = [r for r in self.rows if r.status == "formalized"]
        return EXIT_OK if all(r.verdict == TRUE_VERDICT for r in formal) else EXIT_FAILED

    def to_json(self) -> str:
        return self.model_dump_json(indent=2) + "\n"

    def to_text(self) -> str:
        c = self.config
        lines = [
            f"model: {self.model.states} states ({self.model.reachable} reachable), "
            f"{self.model.transitions} transitions, {self.model.monitors} monitors",
            f"config: mode={c.mode} eps={c.eps:g} eps_compare={c.eps_compare:g} "
            f"max_iter={c.max_iter} literal_budget={c.literal_budget} rule_budget={c.rule_budget}",
            "",
        ]
        width = max((len(r.id) for r in self.rows), default=0)
        for r in self.rows:
            line = f"{r.id.ljust(width)}  {r.verdict}"
            if r.value is not None:
                line += f"  value={r.value:.10g}"
            if r.strategy:
                line += f"  strategy: {r.strategy}"
            lines.append(line)
            if r.witness:
                lines.append(f"{' ' * width}  witness: {' -> '.join(r.witness)}")
        passed = sum(r.verdict == TRUE_VERDICT for r in self.rows)
        formal = sum(r.status == "formalized" for r in self.rows)
        lines += ["", f"{passed}/{formal} formalized requirements hold"]
        return "\n".join(lines) + "\n"


def check_all(
    requirements: list[fm.Requirement],
    model: Model,
    options: Optional[CheckOptions] = None,
    strategies: Optional[Mapping[str, Strategy]] = None,
) -> Report:
    """
    Check every requirement against model.

    Formulas are expanded and bound first, so a naming error aborts the run
    before any checking starts. All ONCE operands share one augmentation;
    each requirement gets a fresh checker.
    """
    options = options or CheckOptions()
    expanded = {r.id: expand(r.formula, model) for r in requirements if r.formula is not None}
    for f in expanded.values():
        check_bindings(f, model)
    augmented = with_monitors(model, expanded.values())
    if augmented.monitors:
        logger.info("added %d monitors: %d states", len(augmented.monitors), len(augmented.states))

    rows = []
    for r in requirements:
        if r.formula is None:
            rows.append(ReportRow(id=r.id, status="informal", verdict=INFORMAL))
            continue
        v = evaluate(expanded[r.id], augmented, options, strategies)
        logger.info("%s: %s", r.id, v.outcome)
        if v.outcome == UNKNOWN_VERDICT:
            logger.warning("%s: strategy budget exhausted before a verdict", r.id)
        rows.append(ReportRow(
            id=r.id,
            status="formalized",
            verdict=v.outcome,
            value=v.value,
            witness=list(v.witness) if v.witness else None,
            strategy=v.strategy,
        ))
    digest = augmented.digest()
    return Report(
        rows=rows,
        model=ModelDigest(monitors=len(augmented.monitors), **digest),
        config=ConfigEcho.of(options),
    )


def run_check(
    model_source: str,
    spec_source: str,
    options: Optional[CheckOptions] = None,
    strategies: Optional[Mapping[str, Strategy]] = None,
) -> Report:
    """Load, parse and check; the process exit status is ``report.exit_status``."""
    model = load_model(model_source)
    requirements = parse(spec_source)
    return check_all(requirements, model, options, strategies)


def score_strategies(
    requirements: list[fm.Requirement],
    model: Model,
    strategies: Mapping[str, Strategy],
    options: Optional[CheckOptions] = None,
) -> ScoreTable:
    """
    Score each strategy on the formalized requirements of a spec.

    A cell is the reachability value for probabilistic requirements and
    1.0 or 0.0 otherwise; unknown verdicts score 0.0.
    """
    formal = [r for r in requirements if r.formula is not None]
    expanded = [expand(r.formula, model) for r in formal]
    for f in expanded:
        check_bindings(f, model)
    augmented = with_monitors(model, expanded)
    rows = []
    for sid in sorted(strategies):
        pruned = apply_strategy(augmented, strategies[sid])
        scores = []
        for f in expanded:
            v = evaluate(f, pruned, options, strategies)
            if v.value is not None:
                scores.append(min(1.0, max(0.0, v.value)))
            else:
                scores.append(1.0 if v.outcome == TRUE_VERDICT else 0.0)
        rows.append(ScoreRow(strategy=sid, scores=scores))
        logger.info("scored strategy %s", sid)
    return ScoreTable(columns=[r.id for r in formal], rows=rows)
