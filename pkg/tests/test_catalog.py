"""
Tests for the requirement catalog.
"""

from mitigation_checker.catalog import catalog, formalized, render_catalog
from mitigation_checker.checker import expand
from mitigation_checker.parser import parse, parse_formula
from mitigation_checker.scenario import ScenarioParams, generate
from mitigation_checker.temporal import missing_names


class TestCatalog:
    """Test suite for catalog entries."""

    def test_ids_unique(self):
        """Requirement ids do not repeat."""
        ids = [r.id for r in catalog()]
        assert len(ids) == len(set(ids))

    def test_informal_entry(self):
        """Ethical justifiability has no formal rendering."""
        (r,) = [r for r in catalog() if r.text == "The mitigation strategy must be ethically justifiable"]
        assert r.status == "informal"
        assert r.formula is None

    def test_control_goal(self):
        """Bringing the pandemic under control is eventually-always."""
        (r,) = [r for r in catalog() if r.id == "G-epi-control"]
        assert r.formula == parse_formula("A F G control_pandemic")
        assert r.section == "epidemiological goals"

    def test_formalized_subset(self):
        """formalized() keeps exactly the entries with formulas."""
        assert [r.id for r in formalized()] == [r.id for r in catalog() if r.formula is not None]
        assert len(formalized()) >= 10

    def test_binds_against_generated_model(self):
        """Every formula names only atoms, features and agents of the two-citizen model."""
        m = generate(ScenarioParams(n_citizens=2)).model
        for r in formalized():
            assert missing_names(expand(r.formula, m), m) == [], r.id

    def test_render_parses(self):
        """The rendered catalog parses back to the same entries."""
        entries = catalog()
        parsed = parse(render_catalog())
        assert [(r.id, r.status, r.formula) for r in parsed] == [(r.id, r.status, r.formula) for r in entries]
