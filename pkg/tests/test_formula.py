"""
Tests for the formula syntax tree: printing, ONCE collection and
well-formedness checks.
"""

from decimal import Decimal

import pytest

from mitigation_checker import formula as fm
from mitigation_checker.errors import FormulaSemanticError

p, q = fm.Atom("p"), fm.Atom("q")


class TestPrinting:
    """Test suite for to_text."""

    def test_path_formula(self):
        """A F p prints without parentheses."""
        assert fm.to_text(fm.PathAll(fm.Finally(p))) == "A F p"

    def test_knows_once(self):
        """Knowledge of a past event prints in prefix form."""
        f = fm.Knows("a", fm.Once(fm.Atom("exposed_i")))
        assert fm.to_text(f) == "K[a] ONCE exposed_i"

    def test_suppose(self):
        """Strategy assumptions print with agent and strategy id."""
        assert fm.to_text(fm.Suppose("a", "s1", q)) == "supp(a: s1) q"

    def test_coalition_with_bounds(self):
        """Probability and complexity bounds print inside brackets."""
        f = fm.Coalition(frozenset({"a"}), fm.ProbabilityBound(Decimal("0.99")), fm.BoundedF(10, p))
        assert fm.to_text(f) == "<<a>>[P>=0.99] F<=10 p"
        g = fm.Coalition(frozenset({"1"}), fm.ComplexityBound(5), fm.Finally(q))
        assert fm.to_text(g) == "<<1>>[compl<=5] F q"

    def test_coalition_agents_sorted(self):
        """Numeric agents come first, in numeric order."""
        f = fm.Coalition(frozenset({"b", "10", "2"}), None, fm.Next(p))
        assert fm.to_text(f) == "<<2,10,b>> X p"

    def test_implication_is_right_associative(self):
        """Only a left-nested implication needs parentheses."""
        assert fm.to_text(fm.Implies(p, fm.Implies(q, p))) == "p -> q -> p"
        assert fm.to_text(fm.Implies(fm.Implies(p, q), p)) == "(p -> q) -> p"

    def test_precedence_parentheses(self):
        """Disjunction under conjunction is parenthesized."""
        assert fm.to_text(fm.And(fm.Or(p, q), p)) == "(p | q) & p"
        assert fm.to_text(fm.Or(fm.And(p, q), p)) == "p & q | p"

    def test_parameterized_atom_key(self):
        """Atom arguments are part of the model key."""
        assert fm.Atom("access", ("a", 1)).key == "access(a,1)"
        assert fm.to_text(fm.Atom("access", ("a", 1))) == "access(a,1)"


class TestCollectOnce:
    """Test suite for collect_once."""

    def test_single_operand(self):
        """Repeated operands are reported once."""
        once = fm.Once(fm.Atom("exposed_1"))
        f = fm.Implies(fm.Knows("a", once), fm.PathAll(fm.Finally(fm.Knows("1", once))))
        assert fm.collect_once(f) == [fm.Atom("exposed_1")]

    def test_past_free(self):
        """Formulas without ONCE yield nothing."""
        assert fm.collect_once(fm.PathAll(fm.Globally(p))) == []

    def test_first_occurrence_order(self):
        """ONCE p & ONCE q & ONCE p gives [p, q]."""
        f = fm.And(fm.And(fm.Once(p), fm.Once(q)), fm.Once(p))
        assert fm.collect_once(f) == [p, q]


class TestValidate:
    """Test suite for the well-formedness checks."""

    def test_once_over_temporal_operand(self):
        """ONCE needs a state predicate."""
        problems = fm.validate(fm.Once(fm.PathAll(fm.Finally(p))))
        assert len(problems) == 1
        assert "ONCE" in problems[0]

    def test_probability_bound_body(self):
        """Probability bounds only go with F and F<=k."""
        f = fm.Coalition(frozenset({"a"}), fm.ProbabilityBound(Decimal("0.5")), fm.Globally(p))
        assert any("F or F<=k" in msg for msg in fm.validate(f))

    def test_probability_out_of_range(self):
        """p must lie in [0, 1]."""
        f = fm.Coalition(frozenset({"a"}), fm.ProbabilityBound(Decimal("1.5")), fm.Finally(p))
        assert any("outside [0,1]" in msg for msg in fm.validate(f))

    def test_complexity_bound_needs_singleton(self):
        """Natural strategies are per agent."""
        f = fm.Coalition(frozenset({"a", "b"}), fm.ComplexityBound(2), fm.Finally(p))
        assert any("singleton" in msg for msg in fm.validate(f))

    def test_unbound_variable(self):
        """Feature comparisons may only use quantified variables."""
        f = fm.FeatureCmp("num_infected", "=", "n")
        assert fm.validate(f)
        assert fm.validate(fm.ForAll("n", fm.Domain(0, 2), f)) == []

    def test_well_formed(self):
        """A typical requirement has no problems."""
        f = fm.Implies(fm.Atom("exposed_1"), fm.PathAll(fm.Finally(fm.Knows("a", fm.Once(fm.Atom("exposed_1"))))))
        assert fm.validate(f) == []


class TestRequirement:
    """Test suite for Requirement."""

    def test_formalized_needs_formula(self):
        """Status and formula presence must agree."""
        with pytest.raises(FormulaSemanticError):
            fm.Requirement("R-1", "text", "formalized")
        with pytest.raises(FormulaSemanticError):
            fm.Requirement("R-1", "text", "informal", p)

    def test_informal(self):
        """Informal requirements carry no formula."""
        r = fm.Requirement("R-1", "ethically justifiable", "informal")
        assert r.formula is None


class TestTraversal:
    """Test suite for walk and node_count."""

    def test_node_count(self):
        """Path bodies count as nodes."""
        assert fm.node_count(fm.PathAll(fm.Until(p, q))) == 4

    def test_is_boolean(self):
        """Only propositional structure is boolean."""
        assert fm.is_boolean(fm.Implies(p, fm.Not(q)))
        assert not fm.is_boolean(fm.Knows("a", p))
