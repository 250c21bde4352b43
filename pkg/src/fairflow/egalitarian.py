"""The egalitarian rule: leximin over the allocations of rationed nodes.

Nodes outside ``S- | D-`` receive their peak in every max-flow, so only the
rationed nodes are filled.  Each round lifts a common floor on the unfrozen
rationed nodes' totals, then freezes those that cannot exceed it.  Only the
node allocation is the rule's contract; the edge realization returned is one
feasible max-flow carrying it.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ._network import InfeasibleError, max_parametric_lower
from .core import Flow, Problem, format_rational, node_allocation
from .edgefair import MechanismOutcome
from .flownet import analyse
from .validation import check_problem


@dataclass(frozen=True)
class NodeTrace:
    step: int
    lambda_star: Fraction
    frozen_nodes: tuple[str, ...]
    remaining: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {"step": self.step, "lambda": format_rational(self.lambda_star),
                "frozen": list(self.frozen_nodes), "remaining": list(self.remaining)}


def _node_arcs(p: Problem, value: Fraction, pinned: dict):
    idx = {v: k + 2 for k, v in enumerate(p.nodes)}
    slot = {}
    arcs = []
    for i in p.suppliers:
        slot[i] = len(arcs)
        lo = pinned.get(i, Fraction(0))
        arcs.append((0, idx[i], lo, lo if i in pinned else p.supply[i]))
    first = len(arcs)
    arcs += [(idx[i], idx[j], Fraction(0), p.cap((i, j))) for i, j in p.edges]
    for j in p.demanders:
        slot[j] = len(arcs)
        lo = pinned.get(j, Fraction(0))
        arcs.append((idx[j], 1, lo, lo if j in pinned else p.demand[j]))
    arcs.append((1, 0, value, value))
    return len(p.nodes) + 2, arcs, slot, first


def egalitarian(p: Problem) -> MechanismOutcome:
    """Max-flow whose rationed-node allocation is leximin optimal."""
    check_problem(p)
    base, value, dec, _ = analyse(p, with_fixed=False)
    active = list(dec.S_minus) + list(dec.D_minus)
    pinned: dict = {}
    floor = Fraction(0)
    trace = []
    flow = base
    while active:
        n, arcs, slot, first = _node_arcs(p, value, pinned)
        start = min(p.peak(v) for v in active)
        for side in (p.suppliers, p.demanders):
            mine = [v for v in active if v in set(side)]
            if mine:
                used = sum((pinned[v] for v in side if v in pinned), Fraction(0))
                start = min(start, (value - used) / len(mine))
        lam, circ = max_parametric_lower(n, arcs, [slot[v] for v in active], start, floor)
        flows = circ.flows()
        keep = [v for v in active if flows[slot[v]] > lam or circ.can_increase(slot[v])]
        dead = tuple(v for v in active if v not in keep)
        if not dead:
            raise InfeasibleError(f"no node frozen at level {lam}")
        pinned.update((v, lam) for v in dead)
        trace.append(NodeTrace(len(trace) + 1, lam, dead, tuple(keep)))
        active, floor = keep, lam
        flow = Flow((e, flows[first + k]) for k, e in enumerate(p.edges))
    return MechanismOutcome(flow, node_allocation(p, flow), tuple(trace), dec,
                            mechanism="egalitarian")
