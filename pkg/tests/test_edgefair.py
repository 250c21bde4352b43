import random
from fractions import Fraction as F

from fairflow import Problem, edge_fair, max_flow_value
from fairflow.core import Dominance, lex_compare, lorenz_compare
from fairflow.edgefair import update_active
from fairflow.fixtures import fig1, fig2_left, fig2_right, fig3
from oracles import MaxFlowSampler, lex_optimal_flow, random_problem


def _flow(p, *vals):
    return dict(zip(p.edges, map(F, vals)))


def test_small_fixtures():
    p = fig2_left()
    assert dict(edge_fair(p).flow.items()) == _flow(p, 1, 1, 2)
    p = fig2_right()
    assert dict(edge_fair(p).flow.items()) == _flow(p, 1, 1)
    p = fig3()
    assert dict(edge_fair(p).flow.items()) == _flow(p, 4, 3, "3/2", "3/2")


def test_matches_lp_oracle_on_rational_instances():
    rng = random.Random(11)
    for _ in range(40):
        p = random_problem(rng, 4, 4, 8, 6)
        got = edge_fair(p).flow
        want = lex_optimal_flow(p)
        assert all(got[e] == want[e] for e in p.edges), p.dumps()


def test_maximum_and_leximin_against_sampled_flows():
    rng = random.Random(12)
    for p in [fig1(), fig3()] + [random_problem(rng, 5, 5, 12) for _ in range(10)]:
        z = edge_fair(p).flow
        assert z.value == max_flow_value(p)
        sampler = MaxFlowSampler(p, rng, vertices=5)
        for _ in range(5):
            other = sampler.sample()
            assert lex_compare(z, other) in (Dominance.A, Dominance.EQUAL)
            assert lorenz_compare(z.values(), other.values()) is not Dominance.B


def test_trace_levels_increase_within_component():
    out = edge_fair(fig1())
    for comp in out.components:
        levels = out.component_lambdas(comp.index)
        assert levels == sorted(levels)
        assert len(set(levels)) == len(levels)
    retired = [e for t in out.trace for e in t.deactivated]
    assert len(retired) == len(set(retired))


def test_update_active_retires_only_blocked_edges():
    out = edge_fair(fig2_left())
    comp = out.components[0]
    remaining = update_active(comp, frozenset(comp.problem.edges), F(1))
    assert remaining == frozenset({("s2", "d2")})


def test_degenerate_inputs():
    assert edge_fair(Problem.build({}, {}, [])).flow.value == 0
    p = Problem.build({"s": 0, "t": 2}, {"d": 3}, [("s", "d"), ("t", "d", 1)])
    z = edge_fair(p).flow
    assert (z[("s", "d")], z[("t", "d")]) == (0, 1)


def test_outcome_serializes():
    doc = edge_fair(fig2_left()).to_dict()
    assert doc["mechanism"] == "edge-fair"
    assert doc["value"] == "4"
    assert [t["lambda"] for t in doc["trace"]] == ["1", "2"]
