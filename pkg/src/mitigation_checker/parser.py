"""
Concrete syntax for requirement spec files and formulas.

Spec files are sequences of blocks::

    requirement R-EPI-2 "bring the pandemic under control":
      A F G control_pandemic

Formulas use an ASCII rendering of the logic: ``A``/``E`` path quantifiers,
``X``/``F``/``G``/``U`` and ``F<=k`` bodies, ``<<a,b>>[P>=p]``/``[compl<=c]``
coalitions, ``K[a]``, ``ONCE``, ``supp(a: s)``, bounded quantifiers and the
``DIAG``/``RESIL`` templates.
"""

import ast
import logging
from decimal import Decimal

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from . import formula as fm
from .errors import (
    CheckerError,
    FormulaSemanticError,
    FormulaSyntaxError,
    SpecFileError,
    SpecParseErrors,
)

logger = logging.getLogger(__name__)

GRAMMAR = r"""
    start: requirement*

    requirement: "requirement" REQ_ID ESCAPED_STRING ":" req_body
    ?req_body: formula
             | "informal"                           -> informal

    ?formula: impl
    ?impl: or_ "->" impl                            -> implies
         | "forall" NAME "in" domain "." impl       -> forall
         | "exists" NAME "in" domain "." impl       -> exists
         | or_
    domain: INT ".." INT                            -> range_domain
          | NAME                                    -> feature_domain
    ?or_: or_ "|" and_                              -> or_op
        | and_
    ?and_: and_ "&" unary                           -> and_op
         | unary
    ?unary: "!" unary                               -> not_op
          | "A" path                                -> path_all
          | "E" path                                -> path_exists
          | "<<" [agents] ">>" [bound] path         -> coalition
          | "K" "[" agent "]" unary                 -> knows
          | "ONCE" unary                            -> once
          | "supp" "(" agent ":" NAME ")" unary     -> suppose
          | "DIAG" "(" agent "," formula ")"        -> diag
          | "RESIL" "(" agent "," formula ")"       -> resil
          | NAME cmpop term                         -> feature_cmp
          | NAME "(" term ("," term)* ")"           -> param_atom
          | NAME                                    -> atom
          | "true"                                  -> const_true
          | "false"                                 -> const_false
          | "(" formula ")"

    path: "X" unary                                 -> nexttime
        | "F" unary                                 -> eventually
        | "F" "<=" INT unary                        -> bounded_eventually
        | "F" "G" unary                             -> eventually_always
        | "G" "F" unary                             -> always_eventually
        | "G" unary                                 -> always
        | unary "U" unary                           -> until

    bound: "[" "P" ">=" NUMBER "]"                  -> prob_bound
         | "[" "compl" "<=" INT "]"                 -> compl_bound

    agents: agent ("," agent)*
    agent: NAME | INT
    term: INT | NAME
    !cmpop: "<=" | ">=" | "<" | ">" | "="

    REQ_ID: /[A-Za-z][A-Za-z0-9_.\-]*/
    NAME: /[A-Za-z_][A-Za-z0-9_]*/
    INT: /[0-9]+/
    NUMBER: /[0-9]+(\.[0-9]+)?/
    COMMENT: /#[^\n]*/

    %import common.ESCAPED_STRING
    %import common.WS
    %ignore WS
    %ignore COMMENT
"""

_parser = Lark(
    GRAMMAR,
    parser="lalr",
    lexer="contextual",
    start=["start", "formula"],
    propagate_positions=True,
    maybe_placeholders=True,
)


@v_args(inline=True)
class FormulaBuilder(Transformer):
    """Turns the lark parse tree into formula dataclasses."""

    def implies(self, left, right):
        return fm.Implies(left, right)

    def or_op(self, left, right):
        return fm.Or(left, right)

    def and_op(self, left, right):
        return fm.And(left, right)

    def not_op(self, arg):
        return fm.Not(arg)

    def path_all(self, body):
        return fm.PathAll(body)

    def path_exists(self, body):
        return fm.PathExists(body)

    def coalition(self, agents, bound, body):
        return fm.Coalition(agents or frozenset(), bound, body)

    def agents(self, *names):
        return frozenset(names)

    def agent(self, token):
        return str(token)

    def knows(self, agent, arg):
        return fm.Knows(agent, arg)

    def once(self, arg):
        return fm.Once(arg)

    def suppose(self, agent, strategy, arg):
        return fm.Suppose(agent, str(strategy), arg)

    def diag(self, agent, arg):
        return fm.Macro("DIAG", agent, arg)

    def resil(self, agent, arg):
        return fm.Macro("RESIL", agent, arg)

    def feature_cmp(self, name, op, rhs):
        return fm.FeatureCmp(str(name), op, rhs)

    def cmpop(self, token):
        return str(token)

    def param_atom(self, name, *args):
        return fm.Atom(str(name), tuple(args))

    def atom(self, name):
        return fm.Atom(str(name))

    def const_true(self):
        return fm.TRUE

    def const_false(self):
        return fm.FALSE

    def term(self, token: Token):
        return int(token) if token.type == "INT" else str(token)

    def forall(self, var, domain, arg):
        return fm.ForAll(str(var), domain, arg)

    def exists(self, var, domain, arg):
        return fm.Exists(str(var), domain, arg)

    def range_domain(self, lo, hi):
        lo, hi = int(lo), int(hi)
        if lo > hi:
            raise FormulaSemanticError(f"empty quantifier range {lo}..{hi}")
        return fm.Domain(lo=lo, hi=hi)

    def feature_domain(self, name):
        return fm.Domain(feature=str(name))

    def prob_bound(self, number):
        return fm.ProbabilityBound(Decimal(str(number)))

    def compl_bound(self, number):
        return fm.ComplexityBound(int(number))

    def nexttime(self, arg):
        return fm.Next(arg)

    def eventually(self, arg):
        return fm.Finally(arg)

    def bounded_eventually(self, k, arg):
        return fm.BoundedF(int(k), arg)

    def eventually_always(self, arg):
        return fm.FG(arg)

    def always_eventually(self, arg):
        return fm.GF(arg)

    def always(self, arg):
        return fm.Globally(arg)

    def until(self, left, right):
        return fm.Until(left, right)

    def informal(self):
        return None

    @v_args(meta=True, inline=False)
    def requirement(self, meta, children):
        req_id, text, body = children
        return (str(req_id), ast.literal_eval(str(text)), body, meta.line, meta.column)

    @v_args(inline=False)
    def start(self, children):
        return list(children)


_builder = FormulaBuilder()


def _syntax_error(exc: UnexpectedInput) -> FormulaSyntaxError:
    line = getattr(exc, "line", 0) or 0
    column = getattr(exc, "column", 0) or 0
    token = getattr(exc, "token", None)
    if token is not None and token.type == "$END":
        message = "unexpected end of input"
    elif token is not None:
        message = f"unexpected token {str(token)!r}"
    else:
        message = "unexpected character"
    return FormulaSyntaxError(message, max(line, 0), max(column, 0))


def _transform(tree):
    try:
        return _builder.transform(tree)
    except VisitError as exc:
        if isinstance(exc.orig_exc, CheckerError):
            raise exc.orig_exc from None
        raise


def parse_formula(source: str) -> fm.Formula:
    """Parse a single formula; raises on syntax or invariant violations."""
    try:
        tree = _parser.parse(source, start="formula")
    except UnexpectedInput as exc:
        raise _syntax_error(exc) from None
    result = _transform(tree)
    problems = fm.validate(result)
    if problems:
        raise FormulaSemanticError(problems[0], 1, 1)
    return result


def parse(source: str) -> list[fm.Requirement]:
    """
    Parse a spec file into its requirement blocks, in file order.

    Raises:
        FormulaSyntaxError: on the first syntax error (with position)
        SpecParseErrors: carrying every semantic error and duplicate id
    """
    try:
        tree = _parser.parse(source, start="start")
    except UnexpectedInput as exc:
        raise _syntax_error(exc) from None

    errors: list[CheckerError] = []
    requirements: list[fm.Requirement] = []
    seen: dict[str, int] = {}
    for req_id, text, body, line, column in _transform(tree):
        if req_id in seen:
            errors.append(
                SpecFileError(f"duplicate requirement id {req_id!r} (first at line {seen[req_id]})", line)
            )
            continue
        seen[req_id] = line
        if body is None:
            requirements.append(fm.Requirement(req_id, text, "informal", line=line))
            continue
        problems = fm.validate(body)
        if problems:
            errors.extend(FormulaSemanticError(f"{req_id}: {p}", line, column) for p in problems)
            continue
        requirements.append(fm.Requirement(req_id, text, "formalized", body, line=line))

    if errors:
        raise SpecParseErrors(errors)
    logger.debug("parsed %d requirements", len(requirements))
    return requirements


def render_spec(requirements: list[fm.Requirement]) -> str:
    """Render requirements in the spec-file format, with status/note comments."""
    blocks = []
    for req in requirements:
        lines = [f"# status: {req.status}"]
        if req.note:
            lines.append(f"# note: {req.note}")
        body = fm.to_text(req.formula) if req.formula is not None else "informal"
        text = req.text.replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f'requirement {req.id} "{text}":')
        lines.append(f"  {body}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + ("\n" if blocks else "")
