"""Max-flow / min-cut engine, Gallai-Edmonds decomposition, fixed edges, PO*.

Every routine works on the augmented network: a super-source feeding each
supplier ``i`` with capacity ``s_i`` and each demander ``j`` draining into a
super-sink with capacity ``d_j``.
"""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from ._network import ResidualNetwork, scale_of, scaled
from .core import Edge, Flow, Problem, format_rational, node_allocation
from .validation import check_flow, check_problem

SOURCE, SINK = 0, 1


@dataclass(frozen=True)
class Decomposition:
    """The unique partition ``(S+, S-, D+, D-)`` of the max-flow structure.

    Every max-flow saturates the edges between ``S_minus`` and ``D_minus``,
    gives ``S_plus`` their full supply and ``D_plus`` their full demand.
    """

    S_plus: tuple[str, ...]
    S_minus: tuple[str, ...]
    D_plus: tuple[str, ...]
    D_minus: tuple[str, ...]
    cross_flow: Fraction

    def side(self, node: str) -> str:
        for name in ("S_plus", "S_minus", "D_plus", "D_minus"):
            if node in getattr(self, name):
                return name
        raise KeyError(node)

    def to_dict(self) -> dict:
        return {"S_plus": list(self.S_plus), "S_minus": list(self.S_minus),
                "D_plus": list(self.D_plus), "D_minus": list(self.D_minus),
                "cross_flow": format_rational(self.cross_flow)}


@dataclass(frozen=True)
class MinCutPair:
    """Inclusion-minimal and -maximal source sides among all minimum cuts.

    Sides list original node ids only; the super-source is implicit.
    """

    smallest_source_side: frozenset
    largest_source_side: frozenset
    cut_value: Fraction


class Verdict(NamedTuple):
    ok: bool
    witness: Optional[str]


class _Augmented:
    """Integer augmented network of a problem, optionally loaded with a flow."""

    def __init__(self, p: Problem, flow: Optional[Mapping[Edge, Fraction]] = None):
        self.p = p
        self.index = {v: k + 2 for k, v in enumerate(p.nodes)}
        caps = [p.cap(e) for e in p.edges]
        self.scale = scale_of(list(p.supply.values()) + list(p.demand.values()) + caps
                              + (list(flow.values()) if flow is not None else []))
        L = self.scale
        net = ResidualNetwork(len(p.nodes) + 2)
        self.supply_arc = {i: net.add_arc(SOURCE, self.index[i], scaled(p.supply[i], L))
                           for i in p.suppliers}
        self.edge_arc = {e: net.add_arc(self.index[e[0]], self.index[e[1]], scaled(u, L))
                         for e, u in zip(p.edges, caps)}
        self.demand_arc = {j: net.add_arc(self.index[j], SINK, scaled(p.demand[j], L))
                           for j in p.demanders}
        self.net = net
        if flow is None:
            self.value = Fraction(net.max_flow(SOURCE, SINK), L)
        else:
            self._load(flow)

    def _load(self, flow):
        p, net, L = self.p, self.net, self.scale
        alloc = node_allocation(p, flow)

        def push(a, amount):
            amount = scaled(amount, L)
            net.cap[a] -= amount
            net.cap[a ^ 1] += amount

        for e in p.edges:
            push(self.edge_arc[e], flow[e])
        for i in p.suppliers:
            push(self.supply_arc[i], alloc.x[i])
        for j in p.demanders:
            push(self.demand_arc[j], alloc.y[j])
        self.value = sum(alloc.x.values(), Fraction(0))

    def flow(self) -> Flow:
        return Flow((e, Fraction(self.net.flow(self.edge_arc[e]), self.scale)) for e in self.p.edges)

    def node_of(self, k: int) -> str:
        return self.p.nodes[k - 2]


def _network(p: Problem, flow=None) -> _Augmented:
    check_problem(p)
    if flow is None:
        return _Augmented(p)
    flow = check_flow(p, flow)
    aug = _Augmented(p, flow)
    if aug.net.reachable(SOURCE)[SINK]:
        raise ValueError("the supplied flow is not a maximum flow")
    return aug


def max_flow(p: Problem) -> tuple[Flow, Fraction]:
    """A maximum flow of ``p`` and its value."""
    aug = _network(p)
    return aug.flow(), aug.value


def max_flow_value(p: Problem) -> Fraction:
    return _network(p).value


def analyse(p: Problem, with_fixed: bool = True):
    """A max-flow, its value, the decomposition and (optionally) the fixed
    edges, all from one solve."""
    aug = _network(p)
    return aug.flow(), aug.value, _decompose(aug), (_fixed(aug) if with_fixed else None)


def extremal_min_cuts(p: Problem, flow: Optional[Mapping[Edge, Fraction]] = None) -> MinCutPair:
    aug = _network(p, flow)
    net = aug.net
    fwd = net.reachable(SOURCE)
    bwd = net.reaching(SINK)
    smallest = frozenset(aug.node_of(k) for k in range(2, net.n) if fwd[k])
    largest = frozenset(aug.node_of(k) for k in range(2, net.n) if not bwd[k])
    return MinCutPair(smallest, largest, aug.value)


def decompose(p: Problem, flow: Optional[Mapping[Edge, Fraction]] = None) -> Decomposition:
    """Gallai-Edmonds partition of ``p``.

    ``S-`` is the supplier part of the smallest min-cut source side.  ``D+``
    is ``f(S-)`` restricted to demanders whose demand arc is saturated in
    every max-flow, i.e. demanders that cannot reach the sink in the residual
    graph.  Any max-flow may be passed in; the result does not depend on it.
    """
    return _decompose(_network(p, flow))


def _decompose(aug: _Augmented) -> Decomposition:
    p = aug.p
    fwd = aug.net.reachable(SOURCE)
    bwd = aug.net.reaching(SINK)
    S_minus = tuple(i for i in p.suppliers if fwd[aug.index[i]])
    S_plus = tuple(i for i in p.suppliers if not fwd[aug.index[i]])
    reach = set().union(*(p.f(i) for i in S_minus)) if S_minus else set()
    D_plus = tuple(j for j in p.demanders if j in reach and not bwd[aug.index[j]])
    D_minus = tuple(j for j in p.demanders if j not in D_plus)
    sm, dm = set(S_minus), set(D_minus)
    cross = sum((p.cap(e) for e in p.edges if e[0] in sm and e[1] in dm), Fraction(0))
    return Decomposition(S_plus, S_minus, D_plus, D_minus, cross)


def fixed_edges(p: Problem, flow: Optional[Mapping[Edge, Fraction]] = None) -> dict[Edge, Fraction]:
    """Edges whose flow is the same in every maximum flow, with that value.

    Edge ``(i, j)`` can grow iff it has spare capacity and ``j`` reaches
    ``i`` in the residual graph without stepping back over the edge itself;
    it can shrink iff the mirror condition holds.  Cycles through the
    super-source or super-sink keep the flow value and count.
    """
    return _fixed(_network(p, flow))


def _fixed(aug: _Augmented) -> dict[Edge, Fraction]:
    p, net = aug.p, aug.net
    plain = {}

    def reach(src, skip):
        if net.cap[skip] <= 0:
            if src not in plain:
                plain[src] = net.reachable(src)
            return plain[src]
        return net.reachable(src, skip=skip)

    out = {}
    for e in p.edges:
        a = aug.edge_arc[e]
        u, v = aug.index[e[0]], aug.index[e[1]]
        grow = net.cap[a] > 0 and reach(v, a ^ 1)[u]
        shrink = net.cap[a ^ 1] > 0 and reach(u, a)[v]
        if not (grow or shrink):
            out[e] = Fraction(net.flow(a), aug.scale)
    return out


def is_po_star(p: Problem, f: Mapping[Edge, Fraction]) -> Verdict:
    """Whether ``f`` induces a PO* allocation, i.e. is a maximum flow.

    Raises :class:`~fairflow.validation.InfeasibleFlowError` for infeasible
    flows.  On failure the witness names the first violated max-flow
    condition (``x = s`` on S+, ``y = d`` on D+, saturation of G(S-, D-)).
    """
    f = check_flow(p, f)
    best = max_flow_value(p)
    if f.value == best:
        return Verdict(True, None)
    dec = decompose(p)
    alloc = node_allocation(p, f)
    for i in dec.S_plus:
        if alloc.x[i] != p.supply[i]:
            return Verdict(False, f"x[{i}] = {format_rational(alloc.x[i])} != s[{i}] = "
                                  f"{format_rational(p.supply[i])} with {i} in S+")
    for j in dec.D_plus:
        if alloc.y[j] != p.demand[j]:
            return Verdict(False, f"y[{j}] = {format_rational(alloc.y[j])} != d[{j}] = "
                                  f"{format_rational(p.demand[j])} with {j} in D+")
    sm, dm = set(dec.S_minus), set(dec.D_minus)
    for e in p.edges:
        if e[0] in sm and e[1] in dm and f[e] != p.cap(e):
            return Verdict(False, f"edge {e[0]}->{e[1]} in G(S-, D-) carries "
                                  f"{format_rational(f[e])} < {format_rational(p.cap(e))}")
    return Verdict(False, f"flow value {format_rational(f.value)} < max-flow value "
                          f"{format_rational(best)}")
