"""
Tests for guaranteed reachability probabilities.
"""

import random
from decimal import Decimal

import pytest

from mitigation_checker import formula as fm
from mitigation_checker.config import CheckOptions
from mitigation_checker.errors import BindingError, ConvergenceError, UnsupportedConstructError
from mitigation_checker.parser import parse_formula
from mitigation_checker.probabilistic import ProbabilisticChecker, prob_eval, reach_value
from mitigation_checker.strategic import StrategicChecker

from .helpers import (
    markov_reach_probabilities,
    mdp_max_reach,
    model_from_dict,
    random_formula,
    random_game,
    random_markov_chain,
    random_mdp,
)


def retry_model():
    """Each attempt succeeds with probability 0.5; failures retry."""
    return model_from_dict({
        "agents": ["a"],
        "atoms": ["goal"],
        "states": [
            {"id": "s0", "local": {"a": "t"}},
            {"id": "goal", "label": ["goal"], "local": {"a": "t"}},
        ],
        "initial": ["s0"],
        "transitions": [
            {"from": "s0", "joint": {"a": "try"}, "to": [{"state": "goal", "prob": 0.5}, {"state": "s0", "prob": 0.5}]},
            {"from": "goal", "joint": {"a": "try"}, "to": "goal"},
        ],
    })


def two_route_model():
    """a chooses a safe route (0.9) or a risky one (0.6); e may block the safe route."""
    def t(src, a, e, to):
        return {"from": src, "joint": {"a": a, "e": e}, "to": to}

    return model_from_dict({
        "agents": ["a", "e"],
        "atoms": ["goal"],
        "states": [
            {"id": "s0", "local": {"a": "t", "e": "t"}},
            {"id": "goal", "label": ["goal"], "local": {"a": "t", "e": "t"}},
            {"id": "fail", "local": {"a": "t", "e": "t"}},
        ],
        "initial": ["s0"],
        "transitions": [
            t("s0", "safe", "open", [{"state": "goal", "prob": 0.9}, {"state": "fail", "prob": 0.1}]),
            t("s0", "safe", "block", "fail"),
            t("s0", "risky", "open", [{"state": "goal", "prob": 0.6}, {"state": "fail", "prob": 0.4}]),
            t("s0", "risky", "block", [{"state": "goal", "prob": 0.6}, {"state": "fail", "prob": 0.4}]),
            t("goal", "safe", "open", "goal"), t("goal", "safe", "block", "goal"),
            t("goal", "risky", "open", "goal"), t("goal", "risky", "block", "goal"),
            t("fail", "safe", "open", "fail"), t("fail", "safe", "block", "fail"),
            t("fail", "risky", "open", "fail"), t("fail", "risky", "block", "fail"),
        ],
    })


class TestReachValue:
    """Test suite for reach_value."""

    def test_retry_loop(self):
        """Retrying forever reaches the goal with probability 1."""
        v = reach_value(retry_model(), ["a"], ["goal"])
        assert v.values["s0"] == pytest.approx(1.0, abs=1e-6)
        assert v.values["goal"] == 1.0
        assert v.residual < CheckOptions().eps

    def test_bounded_horizon(self):
        """Exactly k sweeps: two attempts give 0.75."""
        v = reach_value(retry_model(), ["a"], ["goal"], horizon=2)
        assert v.values["s0"] == pytest.approx(0.75)
        assert v.iterations == 2

    def test_bounded_below_unbounded(self):
        """Values after k sweeps never exceed the limit."""
        m = retry_model()
        limit = reach_value(m, ["a"], ["goal"]).values["s0"]
        previous = 0.0
        for k in range(10):
            value = reach_value(m, ["a"], ["goal"], horizon=k).values["s0"]
            assert previous <= value <= limit + 1e-12
            previous = value

    def test_opponent_minimizes(self):
        """e blocks the safe route, so a settles for the risky one."""
        m = two_route_model()
        assert reach_value(m, ["a"], ["goal"]).values["s0"] == pytest.approx(0.6)
        assert reach_value(m, ["a", "e"], ["goal"]).values["s0"] == pytest.approx(0.9)

    def test_no_convergence(self):
        """Too few sweeps raise with the residual attached."""
        with pytest.raises(ConvergenceError) as exc_info:
            reach_value(retry_model(), ["a"], ["goal"], options=CheckOptions(max_iter=3))
        assert exc_info.value.residual > 0
        assert exc_info.value.iterations == 3

    def test_unknown_agent(self):
        """Coalition agents must exist."""
        with pytest.raises(BindingError):
            reach_value(retry_model(), ["z"], ["goal"])

    def test_markov_chains_match_linear_solve(self):
        """Value iteration agrees with an exact solve on 50 random chains."""
        rng = random.Random(5)
        options = CheckOptions(eps=1e-12)
        for _ in range(50):
            m = random_markov_chain(rng, rng.randint(1, 20))
            goal = {i for i, s in enumerate(m.states) if "goal" in s.label}
            exact = markov_reach_probabilities(m, goal)
            values = reach_value(m, ["x"], m.state_ids(goal), options=options).values
            for i, s in enumerate(m.states):
                assert values[s.id] == pytest.approx(exact[i], abs=1e-6)

    def test_grand_coalition_is_mdp_maximum(self):
        """With every agent in the coalition the value is the best memoryless policy."""
        rng = random.Random(11)
        options = CheckOptions(eps=1e-12)
        for _ in range(60):
            m = random_mdp(rng, rng.randint(1, 6))
            goal = {i for i, s in enumerate(m.states) if "goal" in s.label}
            best = mdp_max_reach(m, goal)
            values = reach_value(m, m.agents, m.state_ids(goal), options=options).values
            for i, s in enumerate(m.states):
                assert values[s.id] == pytest.approx(best[i], abs=1e-6)


class TestProbabilityBound:
    """Test suite for <<A>>[P>=p] formulas."""

    def test_threshold(self):
        """The threshold is compared with >=."""
        m = two_route_model()
        assert prob_eval(parse_formula("<<a>>[P>=0.6] F goal"), m).holds_initially
        assert not prob_eval(parse_formula("<<a>>[P>=0.61] F goal"), m).holds_initially

    def test_value_reported(self):
        """The verdict carries the value at the initial state."""
        v = prob_eval(parse_formula("<<a>>[P>=0.5] F goal"), two_route_model())
        assert v.value == pytest.approx(0.6)

    def test_retry_loop_almost_sure(self):
        """With a tight epsilon the retry loop meets P>=1."""
        v = prob_eval(parse_formula("<<a>>[P>=1] F goal"), retry_model(), CheckOptions(eps=1e-12))
        assert v.holds_initially

    def test_bounded_body(self):
        """F<=k uses exactly k sweeps."""
        m = retry_model()
        assert prob_eval(parse_formula("<<a>>[P>=0.75] F<=2 goal"), m).holds_initially
        assert not prob_eval(parse_formula("<<a>>[P>=0.8] F<=2 goal"), m).holds_initially

    def test_unsupported_body(self):
        """Only F and F<=k bodies carry probability bounds."""
        f = fm.Coalition(frozenset({"a"}), fm.ProbabilityBound(Decimal("0.5")), fm.Globally(fm.Atom("goal")))
        with pytest.raises(UnsupportedConstructError):
            prob_eval(f, retry_model())

    def test_nested_goal(self):
        """Inner formulas are evaluated first and become the goal set."""
        v = prob_eval(parse_formula("<<a>>[P>=0.5] F (goal & A G goal)"), retry_model())
        assert v.holds_initially

    def test_point_models_match_qualitative(self):
        """On deterministic models P>=1 coincides with the IR verdict."""
        rng = random.Random(13)
        for _ in range(150):
            m = random_game(rng, rng.randint(1, 6), rng.randint(1, 3))
            coalition = frozenset(a for a in m.agents if rng.random() < 0.5)
            arg = random_formula(rng, m.agents, 1)
            body = fm.Finally(arg) if rng.random() < 0.5 else fm.BoundedF(rng.randint(0, 3), arg)
            quantitative = ProbabilisticChecker(m).sat(fm.Coalition(coalition, fm.ProbabilityBound(Decimal("1")), body))
            qualitative = StrategicChecker(m).sat(fm.Coalition(coalition, None, body))
            assert quantitative == qualitative
