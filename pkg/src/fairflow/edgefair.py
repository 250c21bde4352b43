"""The edge-fair rule: the lexicographically optimal maximum flow.

Edges whose flow is forced by the decomposition (saturated between S- and D-,
empty between S+ and D+) are pinned first.  The remaining edges split into
connected components that are solved independently by progressive filling:
each round raises a common floor on the active edges as far as the max-flow
set allows, then retires every edge that cannot rise above that floor.
"""
from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ._network import Circulation, InfeasibleError, max_parametric_lower
from .core import Allocation, Edge, Flow, Problem, format_rational, node_allocation
from .flownet import Decomposition, analyse, max_flow_value
from .validation import check_problem


@dataclass(frozen=True)
class IterationTrace:
    """One progressive-filling round inside one component."""

    component: int
    step: int
    lambda_star: Fraction
    deactivated: tuple[Edge, ...]
    remaining_active: tuple[Edge, ...]

    def to_dict(self) -> dict:
        return {"component": self.component, "step": self.step,
                "lambda": format_rational(self.lambda_star),
                "deactivated": [f"{i}->{j}" for i, j in self.deactivated],
                "remaining_active": [f"{i}->{j}" for i, j in self.remaining_active]}


@dataclass(frozen=True)
class MechanismOutcome:
    flow: Flow
    allocation: Allocation
    trace: tuple = ()
    decomposition: Optional[Decomposition] = None
    prefixed: Mapping[Edge, Fraction] = field(default_factory=dict)
    components: tuple = ()
    mechanism: str = ""
    note: str = ""

    def component_lambdas(self, component: int) -> list[Fraction]:
        return [t.lambda_star for t in self.trace if getattr(t, "component", None) == component]

    def to_dict(self) -> dict:
        doc = {
            "mechanism": self.mechanism,
            "value": format_rational(self.flow.value),
            "flow": self.flow.to_dict(),
            "allocation": self.allocation.to_dict(),
            "trace": [t.to_dict() for t in self.trace],
        }
        if self.decomposition is not None:
            doc["decomposition"] = self.decomposition.to_dict()
        if self.prefixed:
            doc["prefixed"] = [{"from": i, "to": j, "flow": format_rational(v)}
                               for (i, j), v in self.prefixed.items()]
        if self.components:
            doc["components"] = [c.to_dict() for c in self.components]
        if self.note:
            doc["note"] = self.note
        return doc


@dataclass(frozen=True)
class Component:
    """A residual subproblem with some edges pinned and a floor on the rest.

    ``problem`` carries the residual peaks left after the globally pinned
    edges are paid out; ``pinned`` holds edges retired inside the component.
    """

    problem: Problem
    pinned: Mapping[Edge, Fraction] = field(default_factory=dict)
    floor: Fraction = Fraction(0)
    kind: str = ""
    index: int = 0

    def to_dict(self) -> dict:
        return {"index": self.index, "kind": self.kind,
                "suppliers": list(self.problem.suppliers),
                "demanders": list(self.problem.demanders),
                "edges": [f"{i}->{j}" for i, j in self.problem.edges]}


def _edge_circulation(comp: Component, value: Fraction):
    """Arcs of the max-flow circulation of ``comp``; edge arcs follow edge order."""
    p = comp.problem
    idx = {v: k + 2 for k, v in enumerate(p.nodes)}
    arcs = [(0, idx[i], Fraction(0), p.supply[i]) for i in p.suppliers]
    first = len(arcs)
    for e in p.edges:
        u = p.cap(e)
        lo = comp.pinned.get(e, Fraction(0))
        arcs.append((idx[e[0]], idx[e[1]], lo, lo if e in comp.pinned else u))
    arcs += [(idx[j], 1, Fraction(0), p.demand[j]) for j in p.demanders]
    arcs.append((1, 0, value, value))
    slot = {e: first + k for k, e in enumerate(p.edges)}
    return len(p.nodes) + 2, arcs, slot


def _solve(comp: Component, active: Iterable[Edge], value: Optional[Fraction] = None):
    active = list(active)
    p = comp.problem
    if value is None:
        value = max_flow_value(p)
    n, arcs, slot = _edge_circulation(comp, value)
    spare = value - sum(comp.pinned.values(), Fraction(0))
    start = min([p.cap(e) for e in active] + [spare / len(active)])
    lam, circ = max_parametric_lower(n, arcs, [slot[e] for e in active], start, comp.floor)
    return lam, circ, slot


def solve_lambda(component: Component, active: Iterable[Edge]) -> Fraction:
    """Largest common floor attainable by the active edges over the max-flows
    of ``component`` that respect its pinned values."""
    active = list(active)
    if not active:
        raise ValueError("no active edges")
    return _solve(component, active)[0]


def _survivors(circ: Circulation, slot, active, lam):
    flows = circ.flows()
    return [e for e in active if flows[slot[e]] > lam or circ.can_increase(slot[e])]


def update_active(component: Component, active: Iterable[Edge], lambda_star: Fraction) -> frozenset:
    """Active edges that can still exceed ``lambda_star`` once every active
    edge is held at or above it."""
    active = list(active)
    value = max_flow_value(component.problem)
    n, arcs, slot = _edge_circulation(component, value)
    bounds = [(u, v, lambda_star if k in {slot[e] for e in active} else lo, hi)
              for k, (u, v, lo, hi) in enumerate(arcs)]
    circ = Circulation(n, bounds)
    if not circ.feasible:
        raise InfeasibleError(f"floor {lambda_star} is not attainable")
    return frozenset(_survivors(circ, slot, active, lambda_star))


def lex_fill(comp: Component) -> tuple[dict, list]:
    """Progressive filling of every edge of ``comp``; returns values and trace."""
    p = comp.problem
    active = list(p.edges)
    pinned = dict(comp.pinned)
    for e in pinned:
        active.remove(e)
    floor = comp.floor
    trace = []
    value = max_flow_value(p)
    while active:
        state = Component(p, pinned, floor, comp.kind, comp.index)
        lam, circ, slot = _solve(state, active, value)
        keep = _survivors(circ, slot, active, lam)
        dead = tuple(e for e in active if e not in keep)
        if not dead:
            raise InfeasibleError(f"no edge retired at level {lam}")
        pinned.update((e, lam) for e in dead)
        trace.append(IterationTrace(comp.index, len(trace) + 1, lam, dead, tuple(keep)))
        active, floor = keep, lam
    return pinned, trace


def split_components(p: Problem, edges: Iterable[Edge]) -> list[list[Edge]]:
    """Connected components of the graph spanned by ``edges``, ordered by
    their first edge in declaration order."""
    parent = {}

    def find(v):
        while parent.setdefault(v, v) != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    edges = list(edges)
    for i, j in edges:
        parent[find(i)] = find(j)
    groups: dict = {}
    for e in edges:
        groups.setdefault(find(e[0]), []).append(e)
    return list(groups.values())


def residual_component(p: Problem, edges: list[Edge], paid: Mapping[Edge, Fraction],
                       dec: Decomposition, index: int) -> Component:
    """Subproblem on ``edges`` with peaks reduced by the flow in ``paid``."""
    sup = {e[0] for e in edges}
    dem = {e[1] for e in edges}
    suppliers = [i for i in p.suppliers if i in sup]
    demanders = [j for j in p.demanders if j in dem]
    supply = {i: p.supply[i] - sum((v for e, v in paid.items() if e[0] == i), Fraction(0))
              for i in suppliers}
    demand = {j: p.demand[j] - sum((v for e, v in paid.items() if e[1] == j), Fraction(0))
              for j in demanders}
    if sup <= set(dec.S_plus) and dem <= set(dec.D_minus):
        kind = "demander-rationed"
    elif sup <= set(dec.S_minus) and dem <= set(dec.D_plus):
        kind = "supplier-rationed"
    else:
        kind = "mixed"
    ordered = [e for e in p.edges if e in set(edges)]
    return Component(p.subproblem(suppliers, demanders, ordered, supply, demand), kind=kind,
                     index=index)


def edge_fair(p: Problem) -> MechanismOutcome:
    """The unique lex-optimal max-flow of ``p``."""
    check_problem(p)
    _, _, dec, fixed = analyse(p)
    sm, dm = set(dec.S_minus), set(dec.D_minus)
    prefixed = {e: v for e, v in fixed.items()
                if (e[0] in sm and e[1] in dm) or (e[0] not in sm and e[1] not in dm)}
    rest = [e for e in p.edges if e not in prefixed]
    values = dict(prefixed)
    trace, comps = [], []
    for k, edges in enumerate(split_components(p, rest)):
        comp = residual_component(p, edges, prefixed, dec, k)
        got, steps = lex_fill(comp)
        values.update(got)
        trace += steps
        comps.append(comp)
    flow = Flow((e, values[e]) for e in p.edges)
    return MechanismOutcome(flow, node_allocation(p, flow), tuple(trace), dec, prefixed,
                            tuple(comps), "edge-fair")
