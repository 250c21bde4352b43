from fractions import Fraction as F

from hypothesis import given, settings, strategies as st

from fairflow import Problem, decompose, edge_fair, egalitarian, fixed_edges, max_flow_value
from fairflow.axioms import Model, check_consistency, check_no_envy
from fairflow.core import Dominance, lex_compare
from fairflow.mechanisms import EdgeFair
from fairflow.validation import check_flow
from oracles import networkx_max_flow_value

quantities = st.builds(F, st.integers(0, 24), st.sampled_from([1, 2, 3]))


@st.composite
def problems(draw, max_side=4):
    ns = draw(st.integers(1, max_side))
    nd = draw(st.integers(1, max_side))
    sup = [f"s{k}" for k in range(ns)]
    dem = [f"d{k}" for k in range(nd)]
    pairs = [(i, j) for i in sup for j in dem]
    edges = draw(st.lists(st.sampled_from(pairs), min_size=1, max_size=len(pairs), unique=True))
    caps = {e: draw(st.one_of(st.none(), quantities)) for e in edges}
    return Problem.build({i: draw(quantities) for i in sup}, {j: draw(quantities) for j in dem},
                         edges, caps)


@settings(max_examples=80, deadline=None)
@given(problems())
def test_edge_fair_is_a_feasible_maximum_flow(p):
    z = edge_fair(p).flow
    check_flow(p, z)
    assert z.value == max_flow_value(p) == networkx_max_flow_value(p)


@settings(max_examples=80, deadline=None)
@given(problems())
def test_egalitarian_is_a_feasible_maximum_flow(p):
    z = egalitarian(p).flow
    check_flow(p, z)
    assert z.value == max_flow_value(p)


@settings(max_examples=60, deadline=None)
@given(problems())
def test_fixed_edges_agree_with_every_mechanism(p):
    fixed = fixed_edges(p)
    for mech in (edge_fair, egalitarian):
        z = mech(p).flow
        assert all(z[e] == v for e, v in fixed.items())
        assert decompose(p, z) == decompose(p)


@settings(max_examples=60, deadline=None)
@given(problems())
def test_edge_fair_beats_egalitarian_in_leximin(p):
    assert lex_compare(edge_fair(p).flow, egalitarian(p).flow) in (Dominance.A, Dominance.EQUAL)


@settings(max_examples=40, deadline=None)
@given(problems(3))
def test_edge_fair_consistent_and_edge_envy_free(p):
    assert check_consistency(EdgeFair(), p).passed
    assert check_no_envy(p, edge_fair(p).flow, Model.EDGE).passed


@settings(max_examples=40, deadline=None)
@given(problems(), st.randoms(use_true_random=False))
def test_edge_order_does_not_matter(p, rnd):
    edges = list(p.edges)
    rnd.shuffle(edges)
    q = p._replace(edges=tuple(edges))
    a, b = edge_fair(p).flow, edge_fair(q).flow
    assert all(a[e] == b[e] for e in p.edges)
