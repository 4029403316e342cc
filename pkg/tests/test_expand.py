"""
Tests for template and quantifier expansion.
"""

import random

import pytest

from mitigation_checker import formula as fm
from mitigation_checker.errors import MacroError, QuantifierError
from mitigation_checker.expand import expand_macros, expand_quantifiers
from mitigation_checker.parser import parse_formula


class TestExpandMacros:
    """Test suite for expand_macros."""

    def test_diagnosability(self):
        """DIAG(a, safe) unfolds to the diagnosability pattern."""
        f = expand_macros(parse_formula("DIAG(a, safe)"))
        assert f == parse_formula("A G (!safe -> <<a>> F K[a] !safe)")

    def test_resilience(self):
        """RESIL(a, safe) unfolds to the resilience pattern."""
        f = expand_macros(parse_formula("RESIL(a, safe)"))
        assert f == parse_formula("A G (!safe -> <<a>> F safe)")

    def test_identity_without_macros(self):
        """Macro-free formulas are returned unchanged."""
        f = parse_formula("A G (p -> E F q)")
        assert expand_macros(f) == f

    def test_nested_macro(self):
        """Macros inside macro arguments are expanded too."""
        f = expand_macros(parse_formula("RESIL(a, DIAG(b, p))"))
        assert not any(isinstance(g, fm.Macro) for g in fm.walk(f))

    def test_idempotent(self):
        """Expanding twice changes nothing."""
        f = parse_formula("DIAG(a, p) & E X RESIL(b, q)")
        once = expand_macros(f)
        assert expand_macros(once) == once

    def test_unknown_macro(self):
        """Unknown template names are rejected."""
        with pytest.raises(MacroError):
            expand_macros(fm.Macro("REPAIR", "a", fm.Atom("p")))


class TestExpandQuantifiers:
    """Test suite for expand_quantifiers."""

    def test_forall_parameterized_atom(self):
        """forall n in 0..1 . p(n) becomes p(0) & p(1)."""
        f = expand_quantifiers(parse_formula("forall n in 0..1 . p(n)"))
        assert f == parse_formula("p(0) & p(1)")

    def test_exists_singleton(self):
        """A one-element domain gives the single instance."""
        assert expand_quantifiers(parse_formula("exists n in 5..5 . q(n)")) == fm.Atom("q", (5,))

    def test_reproduction_schema(self):
        """The slow-spread schema over 0..2 gives three implications."""
        f = expand_quantifiers(parse_formula("forall n in 0..2 . num_infected = n -> A F num_infected < n"))
        expected = parse_formula(
            "(num_infected = 0 -> A F num_infected < 0) & (num_infected = 1 -> A F num_infected < 1)"
            " & (num_infected = 2 -> A F num_infected < 2)"
        )
        assert f == expected

    def test_feature_domain(self):
        """A feature-named domain ranges over 0..max."""
        f = expand_quantifiers(parse_formula("exists n in num_infected . num_infected = n"), {"num_infected": 2})
        assert f == parse_formula("num_infected = 0 | num_infected = 1 | num_infected = 2")

    def test_undeclared_feature(self):
        """Feature domains must be declared."""
        with pytest.raises(QuantifierError):
            expand_quantifiers(parse_formula("forall n in deaths . deaths = n"), {})

    def test_agent_substitution(self):
        """A bound variable also fills agent positions."""
        f = expand_quantifiers(parse_formula("forall i in 1..2 . K[i] p"))
        assert f == parse_formula("K[1] p & K[2] p")
        g = expand_quantifiers(parse_formula("exists i in 1..1 . <<i>> F p"))
        assert g == parse_formula("<<1>> F p")

    def test_shadowing(self):
        """An inner quantifier over the same variable shadows the outer one."""
        f = expand_quantifiers(parse_formula("forall n in 0..0 . (exists n in 3..3 . x = n) & x = n"))
        assert f == parse_formula("x = 3 & x = 0")

    def test_node_count_scales_with_domain(self):
        """A domain of size d copies the body exactly d times."""
        rng = random.Random(3)
        body = parse_formula("forall n in 0..0 . num_infected = n -> A F (num_infected < n | K[a] p)").arg
        size = fm.node_count(body)
        for _ in range(10):
            d = rng.randint(1, 6)
            f = expand_quantifiers(fm.ForAll("n", fm.Domain(0, d - 1), body))
            assert fm.node_count(f) == d * size + (d - 1)
