import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from fairflow import EdgeFair, Egalitarian, Hybrid, Problem, get_mechanism, hybrid_mechanism
from fairflow.fixtures import FIXTURES, fig2_left, fig3, load_fixture


def test_fit_sets_attributes():
    m = EdgeFair().fit(fig2_left())
    assert m.flow_.value == 4
    assert m.allocation_.supply_vector() == (1, 3)
    assert m.decomposition_.D_plus == ("d1", "d2")
    assert m.outcome_.mechanism == "edge-fair"
    assert m.allocation() is m.allocation_


def test_unfitted_allocation_raises():
    with pytest.raises(NotFittedError):
        Egalitarian().allocation()


def test_params_and_clone():
    h = Hybrid(threshold=3, pivot="d1")
    assert h.get_params() == {"threshold": 3, "pivot": "d1"}
    c = clone(h)
    assert c.get_params() == h.get_params() and c is not h
    assert get_mechanism("hybrid", threshold=7).threshold == 7
    with pytest.raises(KeyError):
        get_mechanism("nope")


def test_hybrid_branches_on_pivot():
    p = fig3()
    assert "edge-fair branch" not in hybrid_mechanism(p).note
    assert hybrid_mechanism(p.with_peak("d0", 4)).note == "d0 reports 4; edge-fair branch"
    assert Hybrid()(p) == Egalitarian()(p)
    assert Hybrid()(p.with_peak("d0", 4)) == EdgeFair()(p.with_peak("d0", 4))


def test_hybrid_needs_a_demander():
    with pytest.raises(ValueError):
        Hybrid()(Problem.build({"s": 1}, {}, []))
    with pytest.raises(ValueError):
        Hybrid(pivot="zz")(fig3())


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_calls_are_pure(name):
    p = load_fixture(name)
    for mech in (EdgeFair(), Egalitarian()):
        assert mech(p) == mech(p)
