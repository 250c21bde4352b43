"""Axiom checkers: consistency, no envy, equal treatment, ranking.

Every check returns an :class:`AuditReport`.  A failing report carries a
witness that can be replayed: the pair and the feasible flow that beats the
audited one, or the reduced problem on which the mechanism reallocates.
"""
from __future__ import annotations

import enum
import json
from collections.abc import Callable, Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from ._network import Circulation, max_parametric_lower
from .core import Edge, Flow, Problem, format_rational, node_allocation
from .flownet import is_po_star, max_flow_value
from .preferences import may_prefer, toward
from .validation import check_flow, check_problem

MechanismLike = Callable[[Problem], object]


class Verdict(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    INAPPLICABLE = "inapplicable"


class Model(str, enum.Enum):
    NODE = "node-agents"
    EDGE = "edge-agents"


@dataclass(frozen=True)
class AuditReport:
    axiom: str
    verdict: Verdict
    witness: Optional[dict] = None
    details: tuple[str, ...] = ()
    violations: tuple[dict, ...] = ()

    @property
    def passed(self) -> bool:
        return self.verdict is not Verdict.FAIL

    def to_dict(self) -> dict:
        doc = {"axiom": self.axiom, "verdict": self.verdict.value}
        if self.witness is not None:
            doc["witness"] = self.witness
        if self.details:
            doc["details"] = list(self.details)
        if self.violations:
            doc["violations"] = list(self.violations)
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, doc: Mapping) -> "AuditReport":
        return cls(doc["axiom"], Verdict(doc["verdict"]), doc.get("witness"),
                   tuple(doc.get("details", ())), tuple(doc.get("violations", ())))


def as_flow(result) -> Flow:
    """Accept a Flow or anything carrying one in ``.flow``."""
    return result.flow if hasattr(result, "flow") else Flow(result)


def _edge_key(e: Edge) -> str:
    return f"{e[0]}->{e[1]}"


def _flow_doc(f: Mapping[Edge, Fraction]) -> dict:
    return {_edge_key(e): format_rational(v) for e, v in f.items()}


def _model(model) -> Model:
    return model if isinstance(model, Model) else Model(model)


# -- consistency ---------------------------------------------------------

def check_consistency(mech: MechanismLike, p: Problem) -> AuditReport:
    """Drop each edge in turn, debit its flow from both endpoints, re-run
    ``mech`` and require the same flow on every remaining edge."""
    check_problem(p)
    z = as_flow(mech(p))
    for e in p.edges:
        reduced = p.reduced(e, z[e])
        again = as_flow(mech(reduced))
        expected = z.restrict(reduced.edges)
        for g in reduced.edges:
            if again[g] != expected[g]:
                return AuditReport("consistency", Verdict.FAIL, {
                    "edge": _edge_key(e),
                    "removed_flow": format_rational(z[e]),
                    "reduced_problem": reduced.to_dict(),
                    "first_mismatch": _edge_key(g),
                    "expected": _flow_doc(expected),
                    "got": _flow_doc(again),
                })
    return AuditReport("consistency", Verdict.PASS,
                       details=(f"{len(p.edges)} edge removals agree",))


# -- pairwise reallocation intervals -------------------------------------

def _node_circulation(p: Problem, f: Flow, i: str, j: str):
    """Circulation where only ``i`` and ``j`` may change their totals."""
    alloc = node_allocation(p, f)
    idx = {v: k + 2 for k, v in enumerate(p.nodes)}
    arcs, slot = [], {}
    side = alloc.x if p.is_supplier(i) else alloc.y
    for s in p.suppliers:
        slot[s] = len(arcs)
        lo, hi = ((Fraction(0), p.supply[s]) if s in (i, j) else (alloc.x[s], alloc.x[s]))
        arcs.append((0, idx[s], lo, hi))
    first = len(arcs)
    arcs += [(idx[a], idx[b], Fraction(0), p.cap((a, b))) for a, b in p.edges]
    for d in p.demanders:
        slot[d] = len(arcs)
        lo, hi = ((Fraction(0), p.demand[d]) if d in (i, j) else (alloc.y[d], alloc.y[d]))
        arcs.append((idx[d], 1, lo, hi))
    value = sum(alloc.x.values(), Fraction(0))
    arcs.append((1, 0, value, value))
    return len(p.nodes) + 2, arcs, slot, first, side


def node_pair_range(p: Problem, f: Flow, i: str, j: str):
    """Exact range of ``i``'s total when only ``i`` and ``j`` may trade.

    Returns ``(lo, hi, realize)`` where ``realize(t)`` gives a feasible flow
    with ``i`` at ``t``.
    """
    n, arcs, slot, first, side = _node_circulation(p, f, i, j)
    total = side[i] + side[j]

    def top(a):
        start = min(p.peak(a), total)
        return max_parametric_lower(n, arcs, [slot[a]], start, side[a])[0]

    hi = top(i)
    lo = total - top(j)

    def realize(t: Fraction) -> Flow:
        fixed = list(arcs)
        for a, val in ((i, t), (j, total - t)):
            u, v, _, _ = arcs[slot[a]]
            fixed[slot[a]] = (u, v, val, val)
        circ = Circulation(n, fixed)
        flows = circ.flows()
        return Flow((e, flows[first + k]) for k, e in enumerate(p.edges))

    return lo, hi, realize


def edge_pair_range(p: Problem, f: Flow, e: Edge, g: Edge) -> tuple[Fraction, Fraction]:
    """Range of ``delta`` moved from ``g`` onto ``e`` with every other edge fixed
    and the total flow kept."""
    alloc = node_allocation(p, f)
    lo = max(-f[e], f[g] - p.cap(g))
    hi = min(f[g], p.cap(e) - f[e])
    if e[0] != g[0]:
        hi = min(hi, p.supply[e[0]] - alloc.x[e[0]])
        lo = max(lo, alloc.x[g[0]] - p.supply[g[0]])
    if e[1] != g[1]:
        hi = min(hi, p.demand[e[1]] - alloc.y[e[1]])
        lo = max(lo, alloc.y[g[1]] - p.demand[g[1]])
    return lo, hi


def _moved(f: Flow, e: Edge, g: Edge, delta: Fraction) -> Flow:
    vals = dict(f.items())
    vals[e] += delta
    vals[g] -= delta
    return Flow(vals)


def _same_side_pairs(p: Problem) -> Iterator[tuple[str, str]]:
    for side in (p.suppliers, p.demanders):
        for a in side:
            for b in side:
                if a != b:
                    yield a, b


def _prepare(p: Problem, f, model) -> tuple[Flow, Model]:
    check_problem(p)
    f = check_flow(p, as_flow(f))
    model = _model(model)
    if model is Model.EDGE and not is_po_star(p, f).ok:
        raise ValueError("edge-agent audits need a maximum flow")
    return f, model


# -- no envy ---------------------------------------------------------------

def check_no_envy(p: Problem, f, model: Union[Model, str] = Model.NODE) -> AuditReport:
    """Envy: an agent that may prefer another's share and can move toward its
    peak by trading with that agent alone."""
    f, model = _prepare(p, f, model)
    axiom = f"no-envy[{model.value}]"
    if model is Model.NODE:
        alloc = node_allocation(p, f)
        have = alloc.as_dict()
        for a, b in _same_side_pairs(p):
            peak = p.peak(a)
            if not may_prefer(peak, have[b], have[a]):
                continue
            lo, hi, realize = node_pair_range(p, f, a, b)
            better = toward(peak, have[a], lo, hi)
            if better is not None:
                alt = realize(better)
                return AuditReport(axiom, Verdict.FAIL, {
                    "agent": a, "envied": b, "peak": format_rational(peak),
                    "allocation": format_rational(have[a]),
                    "envied_allocation": format_rational(have[b]),
                    "range": [format_rational(lo), format_rational(hi)],
                    "improved_allocation": format_rational(better),
                    "flow": _flow_doc(alt),
                })
        return AuditReport(axiom, Verdict.PASS)
    for e in p.edges:
        for g in p.edges:
            peak = p.capacity[e]
            if e == g or not may_prefer(peak, f[g], f[e]):
                continue
            lo, hi = edge_pair_range(p, f, e, g)
            better = toward(peak, f[e], f[e] + lo, f[e] + hi)
            if better is not None:
                alt = _moved(f, e, g, better - f[e])
                return AuditReport(axiom, Verdict.FAIL, {
                    "agent": _edge_key(e), "envied": _edge_key(g),
                    "peak": format_rational(peak),
                    "allocation": format_rational(f[e]),
                    "envied_allocation": format_rational(f[g]),
                    "range": [format_rational(f[e] + lo), format_rational(f[e] + hi)],
                    "improved_allocation": format_rational(better),
                    "flow": _flow_doc(alt),
                })
    return AuditReport(axiom, Verdict.PASS)


# -- equal treatment of equals --------------------------------------------

def _closer(current: Fraction, total: Fraction, lo: Fraction, hi: Fraction) -> Optional[Fraction]:
    """Point of ``[lo, hi]`` nearest ``total / 2`` if it narrows the gap."""
    mid = total / 2
    best = min(max(mid, lo), hi)
    return best if abs(2 * best - total) < abs(2 * current - total) else None


def check_ete(p: Problem, f, model: Union[Model, str] = Model.NODE) -> AuditReport:
    """Agents with equal peaks and unequal shares must not be able to narrow
    the gap by trading with each other alone."""
    f, model = _prepare(p, f, model)
    axiom = f"equal-treatment[{model.value}]"
    applicable = False
    if model is Model.NODE:
        have = node_allocation(p, f).as_dict()
        for a, b in _same_side_pairs(p):
            if p.peak(a) != p.peak(b) or p.nodes.index(a) > p.nodes.index(b):
                continue
            applicable = True
            if have[a] == have[b]:
                continue
            lo, hi, realize = node_pair_range(p, f, a, b)
            better = _closer(have[a], have[a] + have[b], lo, hi)
            if better is not None:
                return AuditReport(axiom, Verdict.FAIL, {
                    "pair": [a, b], "peak": format_rational(p.peak(a)),
                    "allocations": [format_rational(have[a]), format_rational(have[b])],
                    "improved_allocations": [format_rational(better),
                                             format_rational(have[a] + have[b] - better)],
                    "flow": _flow_doc(realize(better)),
                })
    else:
        for k, e in enumerate(p.edges):
            for g in p.edges[k + 1:]:
                if p.capacity[e] != p.capacity[g]:
                    continue
                applicable = True
                if f[e] == f[g]:
                    continue
                lo, hi = edge_pair_range(p, f, e, g)
                total = f[e] + f[g]
                better = _closer(f[e], total, f[e] + lo, f[e] + hi)
                if better is not None:
                    return AuditReport(axiom, Verdict.FAIL, {
                        "pair": [_edge_key(e), _edge_key(g)],
                        "peak": format_rational(p.capacity[e]),
                        "allocations": [format_rational(f[e]), format_rational(f[g])],
                        "improved_allocations": [format_rational(better),
                                                 format_rational(total - better)],
                        "flow": _flow_doc(_moved(f, e, g, better - f[e])),
                    })
    if not applicable:
        return AuditReport(axiom, Verdict.INAPPLICABLE, details=("no pair with equal peaks",))
    return AuditReport(axiom, Verdict.PASS)


# -- ranking ---------------------------------------------------------------

def check_ranking(p: Problem, f) -> AuditReport:
    """Among agents with identical neighbourhoods, a higher peak gets weakly
    more (RK) and is left weakly further from its peak (RK*)."""
    check_problem(p)
    f = check_flow(p, as_flow(f))
    have = node_allocation(p, f).as_dict()
    hood = {v: (p.f(v) if p.is_supplier(v) else p.g(v)) for v in p.nodes}
    pairs = 0
    bad = []
    for a, b in _same_side_pairs(p):
        if hood[a] != hood[b] or p.peak(a) > p.peak(b):
            continue
        if p.peak(a) == p.peak(b) and p.nodes.index(a) > p.nodes.index(b):
            continue
        pairs += 1
        pa, pb = p.peak(a), p.peak(b)
        if have[a] > have[b]:
            bad.append({"rule": "RK", "pair": [a, b], "peaks": [format_rational(pa), format_rational(pb)],
                        "allocations": [format_rational(have[a]), format_rational(have[b])]})
        if pa - have[a] > pb - have[b]:
            bad.append({"rule": "RK*", "pair": [a, b], "peaks": [format_rational(pa), format_rational(pb)],
                        "allocations": [format_rational(have[a]), format_rational(have[b])]})
    if not pairs:
        return AuditReport("ranking", Verdict.INAPPLICABLE,
                           details=("no two agents share a neighbourhood",))
    if bad:
        return AuditReport("ranking", Verdict.FAIL, bad[0], violations=tuple(bad))
    return AuditReport("ranking", Verdict.PASS, details=(f"{pairs} twin pairs checked",))


# -- impossibility ------------------------------------------------------

def grid_max_flows(p: Problem, denominator: int = 24) -> list[Flow]:
    """Every max-flow of ``p`` whose entries are multiples of ``1/denominator``."""
    check_problem(p)
    target = max_flow_value(p)
    steps = [int(p.cap(e) * denominator) for e in p.edges]
    found = []
    x = {i: 0 for i in p.suppliers}
    y = {j: 0 for j in p.demanders}
    limit_x = {i: p.supply[i] * denominator for i in p.suppliers}
    limit_y = {j: p.demand[j] * denominator for j in p.demanders}
    values = [0] * len(p.edges)

    def walk(k: int, total: int):
        if k == len(p.edges):
            if Fraction(total, denominator) == target:
                found.append(Flow((e, Fraction(v, denominator)) for e, v in zip(p.edges, values)))
            return
        i, j = p.edges[k]
        top = min(steps[k], limit_x[i] - x[i], limit_y[j] - y[j])
        for v in range(int(top) + 1):
            values[k] = v
            x[i] += v
            y[j] += v
            walk(k + 1, total + v)
            x[i] -= v
            y[j] -= v

    walk(0, 0)
    return found


def impossibility_demo(mech: Optional[MechanismLike] = None, p: Optional[Problem] = None,
                       edge: Edge = ("s2", "d2"), denominator: int = 24) -> list[AuditReport]:
    """Envy-freeness and consistency cannot both hold on the fig2-left instance.

    Without ``mech`` the audited flow is the unique envy-free max-flow; with
    one, it is the mechanism's own output.  The three reports are: (a) the
    audited flow is envy-free, (b) the mechanism keeps it on the problem
    reduced by ``edge``, (c) the kept flow is envy-free there.  At least one
    of them must fail.
    """
    if p is None:
        from .fixtures import fig2_left
        p = fig2_left()
    fair = [z for z in grid_max_flows(p, denominator) if check_no_envy(p, z).passed]
    if mech is None:
        if len(fair) != 1:
            raise RuntimeError(f"expected one envy-free max-flow, found {len(fair)}")
        z = fair[0]
    else:
        z = as_flow(mech(p))
    a = check_no_envy(p, z)
    a = AuditReport("impossibility(a): envy-free on the full problem", a.verdict, a.witness,
                    (f"audited flow {_fmt_tuple(z.values())}",
                     "envy-free max-flows on the grid: "
                     + ", ".join(_fmt_tuple(w.values()) for w in fair)))

    reduced = p.reduced(edge, z[edge])
    kept = z.restrict(reduced.edges)
    if mech is None:
        b = AuditReport("impossibility(b): consistency keeps the flow", Verdict.PASS,
                        details=(f"consistency forces {_fmt_tuple(kept.values())} "
                                 f"after removing {_edge_key(edge)}",))
    else:
        again = as_flow(mech(reduced))
        ok = again == kept
        b = AuditReport("impossibility(b): consistency keeps the flow",
                        Verdict.PASS if ok else Verdict.FAIL,
                        None if ok else {"edge": _edge_key(edge), "expected": _flow_doc(kept),
                                         "got": _flow_doc(again)},
                        (f"consistency forces {_fmt_tuple(kept.values())} "
                         f"after removing {_edge_key(edge)}",))

    fair_reduced = [w for w in grid_max_flows(reduced, denominator)
                    if check_no_envy(reduced, w).passed]
    c = check_no_envy(reduced, kept)
    c = AuditReport("impossibility(c): the kept flow is envy-free on the reduced problem",
                    c.verdict, c.witness,
                    (f"kept flow {_fmt_tuple(kept.values())}",
                     "envy-free max-flows on the reduced grid: "
                     + ", ".join(_fmt_tuple(w.values()) for w in fair_reduced)))
    return [a, b, c]


def _fmt_tuple(values) -> str:
    return "(" + ", ".join(format_rational(v) for v in values) + ")"
