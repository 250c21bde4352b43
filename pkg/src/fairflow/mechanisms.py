"""Estimator-style wrappers and the registry of mechanism identifiers.

A mechanism maps a :class:`~fairflow.core.Problem` to a flow.  ``fit`` stores
the outcome on the instance; calling the instance is pure and returns only the
flow, which is what the axiom and manipulation checkers consume.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Optional

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .core import Flow, Problem, to_rational
from .edgefair import MechanismOutcome, edge_fair
from .egalitarian import egalitarian
from .validation import check_problem


class Mechanism(BaseEstimator):
    name = ""

    def outcome(self, problem: Problem) -> MechanismOutcome:
        raise NotImplementedError

    def fit(self, problem: Problem, y=None):
        out = self.outcome(check_problem(problem))
        self.flow_ = out.flow
        self.allocation_ = out.allocation
        self.trace_ = out.trace
        self.decomposition_ = out.decomposition
        self.outcome_ = out
        return self

    def __call__(self, problem: Problem) -> Flow:
        return self.outcome(problem).flow

    def allocation(self):
        if not hasattr(self, "allocation_"):
            raise NotFittedError(f"{type(self).__name__} is not fitted yet")
        return self.allocation_


class EdgeFair(Mechanism):
    """Lex-optimal max-flow over edges."""

    name = "edge-fair"

    def outcome(self, problem):
        return edge_fair(problem)


class Egalitarian(Mechanism):
    """Leximin max-flow over rationed nodes."""

    name = "egalitarian"

    def outcome(self, problem):
        return egalitarian(problem)


class Hybrid(Mechanism):
    """Egalitarian when the pivot demander reports at least ``threshold``,
    edge-fair otherwise.  Strategyproof but open to coalitions."""

    name = "hybrid"

    def __init__(self, threshold=5, pivot: Optional[str] = None):
        self.threshold = threshold
        self.pivot = pivot

    def outcome(self, problem):
        check_problem(problem)
        pivot = self.pivot
        if pivot is None:
            if not problem.demanders:
                raise ValueError("hybrid mechanism needs at least one demander")
            pivot = problem.demanders[0]
        if pivot not in problem.demand:
            raise ValueError(f"hybrid pivot {pivot!r} is not a demander")
        threshold = to_rational(self.threshold) if not isinstance(self.threshold, Fraction) \
            else self.threshold
        if problem.demand[pivot] >= threshold:
            out, branch = egalitarian(problem), "egalitarian"
        else:
            out, branch = edge_fair(problem), "edge-fair"
        note = f"{pivot} reports {problem.demand[pivot]}; {branch} branch"
        return MechanismOutcome(out.flow, out.allocation, out.trace, out.decomposition,
                                out.prefixed, out.components, "hybrid", note)


MECHANISMS = {"edge-fair": EdgeFair, "egalitarian": Egalitarian, "hybrid": Hybrid}


def get_mechanism(name: str, **params) -> Mechanism:
    try:
        return MECHANISMS[name](**params)
    except KeyError:
        raise KeyError(f"unknown mechanism {name!r}; known: {', '.join(MECHANISMS)}") from None


def hybrid_mechanism(p: Problem) -> MechanismOutcome:
    """The threshold-5 hybrid keyed on the first demander."""
    return Hybrid().outcome(p)
