"""
Command-line front end.

Exit status: 0 when every formalized requirement holds, 1 when some
requirement is false or unknown within budget, 2 on any error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Optional, Sequence, TypeVar

from pydantic import ValidationError

from .catalog import catalog, render_catalog
from .checker import expand
from .config import CheckMode, CheckOptions
from .errors import CheckerError, SpecParseErrors
from .model import Model, Strategy, load_model, model_to_dict
from .pareto import load_score_table, pareto_frontier
from .parser import parse, render_spec
from .report import EXIT_ERROR, EXIT_OK, check_all, score_strategies
from .scenario import ScenarioParams, generate
from .strategic import load_strategies

logger = logging.getLogger(__name__)

T = TypeVar("T")


class InputError(Exception):
    """An error attributed to one input file."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _load(path: str, loader: Callable[[str], T]) -> T:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(path, e.strerror or str(e)) from None
    try:
        return loader(text)
    except SpecParseErrors as e:
        raise InputError(path, "\n".join(str(x) for x in e.errors)) from None
    except CheckerError as e:
        raise InputError(path, str(e)) from None


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _options(args: argparse.Namespace) -> CheckOptions:
    return CheckOptions(
        mode=CheckMode(args.mode),
        eps=args.eps,
        eps_compare=args.eps_compare,
        max_iter=args.max_iter,
        literal_budget=args.literal_budget,
        rule_budget=args.rule_budget,
        max_candidates=args.max_candidates,
    )


# --- commands -------------------------------------------------------------


def cmd_parse(args: argparse.Namespace) -> int:
    requirements = _load(args.spec, parse)
    if args.print_ast:
        for r in requirements:
            sys.stdout.write(f"{r.id}: {r.formula!r}\n")
    else:
        sys.stdout.write(render_spec(requirements))
    return EXIT_OK


def cmd_expand(args: argparse.Namespace) -> int:
    requirements = _load(args.spec, parse)
    model: Optional[Model] = _load(args.model, load_model) if args.model else None
    try:
        expanded = [
            dataclasses.replace(r, formula=expand(r.formula, model)) if r.formula is not None else r
            for r in requirements
        ]
    except CheckerError as e:
        raise InputError(args.spec, str(e)) from None
    sys.stdout.write(render_spec(expanded))
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    options = _options(args)
    model = _load(args.model, load_model)
    requirements = _load(args.spec, parse)
    strategies: dict[str, Strategy] = _load(args.strategies, load_strategies) if args.strategies else {}
    try:
        report = check_all(requirements, model, options, strategies)
    except CheckerError as e:
        raise InputError(args.spec, str(e)) from None
    sys.stdout.write(report.to_json() if args.json else report.to_text())
    return report.exit_status


def cmd_score(args: argparse.Namespace) -> int:
    options = _options(args)
    model = _load(args.model, load_model)
    requirements = _load(args.spec, parse) if args.spec else catalog()
    strategies = _load(args.strategies, load_strategies)
    try:
        table = score_strategies(requirements, model, strategies, options)
    except CheckerError as e:
        raise InputError(args.spec or args.model, str(e)) from None
    _emit(table.model_dump_json(indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_pareto(args: argparse.Namespace) -> int:
    table = _load(args.scores, load_score_table)
    try:
        frontier = pareto_frontier(table)
    except CheckerError as e:
        raise InputError(args.scores, str(e)) from None
    for row in frontier:
        scores = " ".join(f"{c}={v:g}" for c, v in zip(table.columns, row.scores))
        sys.stdout.write(f"{row.strategy}  {scores}\n")
    return EXIT_OK


def cmd_catalog(args: argparse.Namespace) -> int:
    _emit(render_catalog(), args.out)
    return EXIT_OK


def _citizen_list(text: str) -> list[int]:
    text = text.strip()
    return [int(x) for x in text.split(",")] if text else []


def _adoption(text: str, n: int) -> Optional[tuple[bool, ...]]:
    if text == "all":
        return None
    if text == "none":
        return tuple(False for _ in range(n))
    users = set(_citizen_list(text))
    return tuple(i in users for i in range(1, n + 1))


def _contacts(text: str):
    if text in ("complete", "ring"):
        return text
    edges = []
    for pair in text.split(","):
        u, v = pair.split("-")
        edges.append((int(u), int(v)))
    return tuple(edges)


def cmd_gen_epidemic(args: argparse.Namespace) -> int:
    try:
        params = ScenarioParams(
            n_citizens=args.citizens,
            adoption=_adoption(args.adoption, args.citizens),
            contact_graph=_contacts(args.contacts),
            testing=args.testing == "on",
            notify_reliability=args.reliability,
            initial_exposed=frozenset(_citizen_list(args.citizens_exposed)),
            max_states=args.max_states,
        )
    except (ValidationError, ValueError) as e:
        raise InputError("gen epidemic", str(e)) from None
    try:
        scenario = generate(params)
    except CheckerError as e:
        raise InputError("gen epidemic", str(e)) from None
    _emit(json.dumps(model_to_dict(scenario.model), indent=2) + "\n", args.out)
    if args.strategies_out:
        table = {"strategies": [
            {"id": s.id, "agent": s.agent, "choice": dict(sorted(s.choice.items()))}
            for _, s in sorted(scenario.strategies.items())
        ]}
        Path(args.strategies_out).write_text(json.dumps(table, indent=2) + "\n", encoding="utf-8")
    return EXIT_OK


# --- argument parsing -----------------------------------------------------


def _add_check_options(p: argparse.ArgumentParser) -> None:
    defaults = CheckOptions()
    p.add_argument("--mode", choices=[m.value for m in CheckMode], default=defaults.mode.value,
                   help="strategy semantics for coalition operators")
    p.add_argument("--eps", type=float, default=defaults.eps, help="value-iteration residual threshold")
    p.add_argument("--eps-compare", type=float, default=defaults.eps_compare,
                   help="tolerance of the probability threshold test")
    p.add_argument("--max-iter", type=int, default=defaults.max_iter, help="value-iteration sweep limit")
    p.add_argument("--literal-budget", type=int, default=defaults.literal_budget,
                   help="max literals per natural-strategy guard")
    p.add_argument("--rule-budget", type=int, default=defaults.rule_budget,
                   help="max rules per natural strategy")
    p.add_argument("--max-candidates", type=int, default=defaults.max_candidates,
                   help="cap on enumerated uniform or natural strategies")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mitigation-check",
        description="Check epidemic-mitigation requirements on multi-agent models.",
    )
    parser.add_argument("--log-level", type=str.upper, default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
                        help="logging level (default WARNING)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a spec file and print it back")
    p.add_argument("spec")
    p.add_argument("--print-ast", action="store_true", help="print the syntax tree of each formula")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("expand", help="expand templates and quantifiers")
    p.add_argument("--spec", required=True)
    p.add_argument("--model", help="model whose feature domains bound quantifiers")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("check", help="check a spec file against a model")
    p.add_argument("--model", required=True)
    p.add_argument("--spec", required=True)
    p.add_argument("--strategies", help="strategy table for supp operators")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    _add_check_options(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("score", help="score strategies on a spec (default: the catalog)")
    p.add_argument("--model", required=True)
    p.add_argument("--strategies", required=True)
    p.add_argument("--spec")
    p.add_argument("--out")
    _add_check_options(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("pareto", help="non-dominated rows of a score table")
    p.add_argument("--scores", required=True)
    p.set_defaults(func=cmd_pareto)

    p = sub.add_parser("catalog", help="print the requirement catalog")
    p.add_argument("--out")
    p.set_defaults(func=cmd_catalog)

    gen = sub.add_parser("gen", help="generate scenario models").add_subparsers(dest="scenario", required=True)
    p = gen.add_parser("epidemic", help="epidemic-mitigation scenario")
    p.add_argument("--citizens", type=int, default=2)
    p.add_argument("--adoption", default="all", help="all, none or a list of app users, e.g. 1,3")
    p.add_argument("--testing", choices=["on", "off"], default="on")
    p.add_argument("--reliability", type=float, default=1.0, help="notification success probability")
    p.add_argument("--citizens-exposed", default="1", help="citizens possibly exposed at start, e.g. 1,2")
    p.add_argument("--contacts", default="complete", help="complete, ring or edges such as 1-2,2-3")
    p.add_argument("--max-states", type=int, default=ScenarioParams().max_states)
    p.add_argument("--out")
    p.add_argument("--strategies-out", help="write the standard authority strategies here")
    p.set_defaults(func=cmd_gen_epidemic)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=args.log_level,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except InputError as e:
        sys.stderr.write(f"{e}\n")
        return EXIT_ERROR
    except ValidationError as e:
        sys.stderr.write(f"options: {e.errors()[0]['msg']}\n")
        return EXIT_ERROR
    except OSError as e:
        sys.stderr.write(f"{e.filename}: {e.strerror}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
