import random
from fractions import Fraction as F

import pytest

from fairflow import Flow, Problem, decompose, fixed_edges, is_po_star, max_flow, max_flow_value
from fairflow.fixtures import fig1, fig2_left
from fairflow.flownet import extremal_min_cuts
from fairflow.validation import InfeasibleFlowError
from oracles import flow_constraints, lp_max_flow_value, networkx_max_flow_value, random_problem, simplex_max


def _range_over_max_flows(p, coeffs):
    """Exact (min, max) of a linear form over all maximum flows."""
    n = len(p.edges)
    cons = flow_constraints(p)
    cons.append(({k: 1 for k in range(n)}, "=", lp_max_flow_value(p)))
    hi, _ = simplex_max(n, coeffs, cons)
    lo, _ = simplex_max(n, {k: -v for k, v in coeffs.items()}, cons)
    return -lo, hi


def _small_corpus(seed, count=40):
    rng = random.Random(seed)
    return [random_problem(rng, 4, 4, 8, 6) for _ in range(count)]


def test_max_flow_matches_networkx_and_lp():
    for p in _small_corpus(1) + [fig1()]:
        f, value = max_flow(p)
        assert value == f.value == networkx_max_flow_value(p) == lp_max_flow_value(p)
        assert is_po_star(p, f).ok


def test_fig1_values():
    p = fig1()
    assert max_flow_value(p) == F(107, 3)
    d = decompose(p)
    assert d.S_plus == ("s1", "s2", "s3", "s4")
    assert d.D_minus == ("d1", "d2", "d3", "d4")
    assert d.side("s7") == "S_minus" and d.side("d7") == "D_plus"
    assert d.cross_flow == 1


def test_decomposition_against_lp_ranges():
    for p in _small_corpus(2):
        d = decompose(p)
        for i in p.suppliers:
            lo, _ = _range_over_max_flows(p, {k: 1 for k, e in enumerate(p.edges) if e[0] == i})
            assert (lo == p.supply[i]) == (i in d.S_plus), (p.dumps(), i)
        near = {j for i in d.S_minus for j in p.f(i)}
        for j in p.demanders:
            lo, _ = _range_over_max_flows(p, {k: 1 for k, e in enumerate(p.edges) if e[1] == j})
            if j in d.D_plus:
                assert lo == p.demand[j]
            elif j in near:
                assert lo < p.demand[j]


def test_saturation_between_rationed_sides():
    for p in _small_corpus(3):
        d = decompose(p)
        sm, dm = set(d.S_minus), set(d.D_minus)
        for k, e in enumerate(p.edges):
            if e[0] in sm and e[1] in dm:
                assert _range_over_max_flows(p, {k: 1}) == (p.cap(e), p.cap(e))


def test_fixed_edges_against_lp_ranges():
    for p in _small_corpus(4) + [fig2_left()]:
        fixed = fixed_edges(p)
        for k, e in enumerate(p.edges):
            lo, hi = _range_over_max_flows(p, {k: 1})
            if lo == hi:
                assert fixed.get(e) == lo, (p.dumps(), e)
            else:
                assert e not in fixed, (p.dumps(), e)


def test_extremal_min_cuts_nested():
    for p in _small_corpus(5):
        cuts = extremal_min_cuts(p)
        assert cuts.smallest_source_side <= cuts.largest_source_side
        assert cuts.cut_value == max_flow_value(p)


def test_is_po_star_witnesses():
    p = fig2_left()
    zero = Flow.zeros(p.edges)
    verdict = is_po_star(p, zero)
    assert not verdict.ok and "d1" in verdict.witness
    with pytest.raises(InfeasibleFlowError) as info:
        is_po_star(p, {("s1", "d1"): 3, ("s2", "d1"): 0, ("s2", "d2"): 0})
    assert info.value.constraint == "y[d1] <= d[d1]"


def test_empty_and_edgeless():
    p = Problem.build({}, {}, [])
    assert max_flow_value(p) == 0
    q = Problem.build({"s": 2}, {"d": 3}, [])
    assert max_flow_value(q) == 0
    assert decompose(q).S_minus == ("s",)
