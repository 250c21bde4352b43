"""Input validation helpers shared by the mechanisms and checkers."""
from __future__ import annotations

from collections.abc import Mapping
from fractions import Fraction

from .core import Edge, Flow, Problem, ProblemFormatError, node_allocation


class InfeasibleFlowError(ValueError):
    """A flow violates a capacity, supply or demand bound."""

    def __init__(self, message: str, constraint: str):
        super().__init__(message)
        self.constraint = constraint


def check_problem(p: Problem) -> Problem:
    """Validate ``p`` and return it unchanged."""
    if not isinstance(p, Problem):
        raise TypeError(f"expected a Problem, got {type(p).__name__}")
    seen = set()
    for node in p.suppliers + p.demanders:
        if node in seen:
            raise ProblemFormatError(f"duplicate node id {node!r}", key=node)
        seen.add(node)
    for i in p.suppliers:
        if i not in p.supply:
            raise ProblemFormatError(f"supplier {i!r} has no peak", key=i)
        if p.supply[i] < 0:
            raise ProblemFormatError(f"supplier {i!r} has negative peak", key=i)
    for j in p.demanders:
        if j not in p.demand:
            raise ProblemFormatError(f"demander {j!r} has no peak", key=j)
        if p.demand[j] < 0:
            raise ProblemFormatError(f"demander {j!r} has negative peak", key=j)
    sup, dem = set(p.suppliers), set(p.demanders)
    edges = set()
    for e in p.edges:
        i, j = e
        if i not in sup:
            raise ProblemFormatError(f"edge {i}->{j}: unknown supplier {i!r}", key=i)
        if j not in dem:
            raise ProblemFormatError(f"edge {i}->{j}: unknown demander {j!r}", key=j)
        if e in edges:
            raise ProblemFormatError(f"duplicate edge {i}->{j}", key=f"{i}->{j}")
        edges.add(e)
        u = p.capacity.get(e, 0)
        if u is not None and u < 0:
            raise ProblemFormatError(f"edge {i}->{j} has negative capacity", key=f"{i}->{j}")
    if set(p.capacity) != edges:
        extra = next(iter(set(p.capacity) ^ edges))
        raise ProblemFormatError(f"capacity table does not match edges at {extra}", key=extra)
    return p


def check_flow(p: Problem, f: Mapping[Edge, Fraction]) -> Flow:
    """Return ``f`` as a :class:`Flow` after checking feasibility for ``p``."""
    if set(f) != set(p.edges):
        missing = set(p.edges) ^ set(f)
        raise InfeasibleFlowError(f"flow is not defined on the problem's edges: {sorted(missing)}",
                                  "support")
    f = Flow((e, f[e]) for e in p.edges)
    for e in p.edges:
        if f[e] < 0:
            raise InfeasibleFlowError(f"negative flow on {e[0]}->{e[1]}", f"flow[{e[0]}->{e[1]}] >= 0")
        u = p.capacity[e]
        if u is not None and f[e] > u:
            raise InfeasibleFlowError(f"flow on {e[0]}->{e[1]} exceeds capacity",
                                      f"flow[{e[0]}->{e[1]}] <= u")
    alloc = node_allocation(p, f)
    for i in p.suppliers:
        if alloc.x[i] > p.supply[i]:
            raise InfeasibleFlowError(f"supplier {i} sends more than its peak", f"x[{i}] <= s[{i}]")
    for j in p.demanders:
        if alloc.y[j] > p.demand[j]:
            raise InfeasibleFlowError(f"demander {j} receives more than its peak", f"y[{j}] <= d[{j}]")
    return f
