"""Independent reference computations used only by the tests.

Nothing here imports the package's flow engine: the LP oracle is a dense
two-phase simplex over Fractions with Bland's rule, max-flow values are
cross-checked with networkx on integer-scaled data, and sampled max-flows are
random convex combinations of LP vertices.
"""
from __future__ import annotations

import random
from fractions import Fraction
from math import lcm

import networkx as nx

from fairflow.core import Problem


# -- exact simplex -----------------------------------------------------------

class Infeasible(Exception):
    pass


def simplex_max(n: int, objective: dict, constraints: list):
    """Maximise ``objective`` over ``x >= 0`` (``n`` variables).

    ``constraints`` holds ``(coeffs, sense, rhs)`` with ``coeffs`` a
    ``{var: coef}`` dict and ``sense`` one of ``<=``, ``>=``, ``=``.
    Returns ``(value, x)``; raises :class:`Infeasible`.  Bounded problems only.
    """
    rows = []
    for coeffs, sense, rhs in constraints:
        rhs = Fraction(rhs)
        coeffs = {k: Fraction(v) for k, v in coeffs.items()}
        if rhs < 0:
            coeffs = {k: -v for k, v in coeffs.items()}
            rhs = -rhs
            sense = {"<=": ">=", ">=": "<=", "=": "="}[sense]
        rows.append((coeffs, sense, rhs))
    m = len(rows)
    n_slack = sum(1 for _, s, _ in rows if s != "=")
    n_art = sum(1 for _, s, _ in rows if s != "<=")
    width = n + n_slack + n_art
    tab = []
    basis = []
    slack = n
    art = n + n_slack
    artificials = []
    for coeffs, sense, rhs in rows:
        row = [Fraction(0)] * (width + 1)
        for k, v in coeffs.items():
            row[k] = v
        row[-1] = rhs
        if sense == "<=":
            row[slack] = Fraction(1)
            basis.append(slack)
            slack += 1
        elif sense == ">=":
            row[slack] = Fraction(-1)
            slack += 1
            row[art] = Fraction(1)
            basis.append(art)
            artificials.append(art)
            art += 1
        else:
            row[art] = Fraction(1)
            basis.append(art)
            artificials.append(art)
            art += 1
        tab.append(row)

    def pivot(r, c, obj=None):
        pr = tab[r]
        pv = pr[c]
        tab[r] = pr = [v / pv for v in pr]
        for k in range(m):
            if k != r and tab[k][c] != 0:
                f = tab[k][c]
                tab[k] = [a - f * b for a, b in zip(tab[k], pr)]
        if obj is not None and obj[c] != 0:
            f = obj[c]
            obj[:] = [a - f * b for a, b in zip(obj, pr)]
        basis[r] = c

    def run(cost, allowed):
        # maximise cost . x; obj holds reduced costs, Bland's rule throughout
        obj = [Fraction(cost.get(c, 0)) for c in range(width)] + [Fraction(0)]
        for k in range(m):
            f = obj[basis[k]]
            if f != 0:
                obj = [a - f * b for a, b in zip(obj, tab[k])]
        while True:
            enter = next((c for c in allowed if obj[c] > 0), None)
            if enter is None:
                return
            best = None
            for k in range(m):
                a = tab[k][enter]
                if a > 0:
                    ratio = tab[k][-1] / a
                    if best is None or ratio < best[0] or (ratio == best[0] and basis[k] < basis[best[1]]):
                        best = (ratio, k)
            if best is None:
                raise ValueError("unbounded LP")
            pivot(best[1], enter, obj)

    everything = list(range(width))
    if artificials:
        run({a: Fraction(-1) for a in artificials}, everything)
        if sum((tab[k][-1] for k in range(m) if basis[k] in artificials), Fraction(0)) != 0:
            raise Infeasible()
        # drive zero-valued artificials out of the basis where possible
        for k in range(m):
            if basis[k] in artificials:
                col = next((c for c in range(n + n_slack) if tab[k][c] != 0), None)
                if col is not None:
                    pivot(k, col)
    run({k: Fraction(v) for k, v in objective.items()}, list(range(n + n_slack)))
    x = [Fraction(0)] * n
    for k, b in enumerate(basis):
        if b < n:
            x[b] = tab[k][-1]
    value = sum((Fraction(v) * x[k] for k, v in objective.items()), Fraction(0))
    return value, x


# -- flow polytope helpers -----------------------------------------------------

def _cap(p: Problem, e) -> Fraction:
    u = p.capacity[e]
    return min(p.supply[e[0]], p.demand[e[1]]) if u is None else u


def flow_constraints(p: Problem) -> list:
    cons = []
    for i in p.suppliers:
        cons.append(({k: 1 for k, e in enumerate(p.edges) if e[0] == i}, "<=", p.supply[i]))
    for j in p.demanders:
        cons.append(({k: 1 for k, e in enumerate(p.edges) if e[1] == j}, "<=", p.demand[j]))
    for k, e in enumerate(p.edges):
        cons.append(({k: 1}, "<=", _cap(p, e)))
    return cons


def lp_max_flow_value(p: Problem) -> Fraction:
    if not p.edges:
        return Fraction(0)
    return simplex_max(len(p.edges), {k: 1 for k in range(len(p.edges))}, flow_constraints(p))[0]


def lex_optimal_flow(p: Problem) -> dict:
    """Lex-optimal max-flow by sequential LPs over the whole edge set.

    Each round maximises a common floor on the active edges, then retires
    every active edge whose own maximum at that floor equals the floor.
    """
    E = list(p.edges)
    n = len(E)
    if not n:
        return {}
    lam = n  # index of the floor variable
    base = flow_constraints(p)
    base.append(({k: 1 for k in range(n)}, "=", lp_max_flow_value(p)))
    pinned: dict = {}
    active = list(range(n))
    while active:
        cons = list(base)
        cons += [({k: 1}, "=", v) for k, v in pinned.items()]
        cons += [({lam: 1, k: -1}, "<=", 0) for k in active]
        level, _ = simplex_max(n + 1, {lam: 1}, cons)
        fixed = list(base)
        fixed += [({k: 1}, "=", v) for k, v in pinned.items()]
        fixed += [({k: 1}, ">=", level) for k in active]
        keep = []
        for k in active:
            top, _ = simplex_max(n, {k: 1}, fixed)
            if top > level:
                keep.append(k)
            else:
                pinned[k] = level
        if len(keep) == len(active):
            raise AssertionError("no edge retired")
        active = keep
    return {E[k]: pinned[k] for k in range(n)}


# -- max-flow sampling ---------------------------------------------------------

class MaxFlowSampler:
    """Random max-flows as convex combinations of LP vertices of the max-flow set."""

    def __init__(self, p: Problem, rng: random.Random, vertices: int = 10):
        self.p = p
        self.rng = rng
        n = len(p.edges)
        cons = flow_constraints(p)
        cons.append(({k: 1 for k in range(n)}, "=", lp_max_flow_value(p)))
        self.vertices = []
        for _ in range(vertices):
            weights = {k: rng.randint(-5, 5) for k in range(n)}
            _, x = simplex_max(n, weights, cons)
            self.vertices.append(x)

    def sample(self) -> dict:
        w = [Fraction(self.rng.randint(0, 6)) for _ in self.vertices]
        if not any(w):
            w[0] = Fraction(1)
        total = sum(w)
        return {e: sum((wk * v[k] for wk, v in zip(w, self.vertices)), Fraction(0)) / total
                for k, e in enumerate(self.p.edges)}


def networkx_max_flow_value(p: Problem) -> Fraction:
    """Max-flow value from networkx on integer-scaled data."""
    vals = list(p.supply.values()) + list(p.demand.values()) + [_cap(p, e) for e in p.edges]
    scale = lcm(1, *(Fraction(v).denominator for v in vals))
    g = nx.DiGraph()
    g.add_node("#src")
    g.add_node("#snk")
    for i in p.suppliers:
        g.add_edge("#src", ("S", i), capacity=int(p.supply[i] * scale))
    for j in p.demanders:
        g.add_edge(("D", j), "#snk", capacity=int(p.demand[j] * scale))
    for e in p.edges:
        g.add_edge(("S", e[0]), ("D", e[1]), capacity=int(_cap(p, e) * scale))
    return Fraction(nx.maximum_flow_value(g, "#src", "#snk"), scale)


# -- random instances ----------------------------------------------------------

def random_problem(rng: random.Random, max_suppliers: int = 8, max_demanders: int = 8,
                   max_edges: int = 20, max_peak: int = 12, denominators=(1, 2, 3, 4),
                   finite_caps: float = 0.3, integer: bool = False) -> Problem:
    ns = rng.randint(1, max_suppliers)
    nd = rng.randint(1, max_demanders)
    suppliers = [f"s{k + 1}" for k in range(ns)]
    demanders = [f"d{k + 1}" for k in range(nd)]
    pairs = [(i, j) for i in suppliers for j in demanders]
    rng.shuffle(pairs)
    edges = pairs[:rng.randint(1, min(max_edges, len(pairs)))]

    def q():
        if integer:
            return Fraction(rng.randint(0, max_peak))
        d = rng.choice(denominators)
        return Fraction(rng.randint(0, max_peak * d), d)

    supply = {i: q() for i in suppliers}
    demand = {j: q() for j in demanders}
    caps = {e: (q() if rng.random() < finite_caps else None) for e in edges}
    return Problem.build(supply, demand, edges, caps)


def grid_max_flows(p: Problem, denominator: int) -> list[dict]:
    """All max-flows with entries in ``(1/denominator) Z`` by plain enumeration."""
    target = lp_max_flow_value(p) * denominator
    E = list(p.edges)
    out = []
    x = {i: 0 for i in p.suppliers}
    y = {j: 0 for j in p.demanders}
    vals = [0] * len(E)

    def go(k, total):
        if k == len(E):
            if total == target:
                out.append({e: Fraction(v, denominator) for e, v in zip(E, vals)})
            return
        i, j = E[k]
        top = min(_cap(p, E[k]) * denominator, p.supply[i] * denominator - x[i],
                  p.demand[j] * denominator - y[j])
        for v in range(int(top) + 1):
            vals[k] = v
            x[i] += v
            y[j] += v
            go(k + 1, total + v)
            x[i] -= v
            y[j] -= v

    go(0, 0)
    return out


def lex_optimal_node_totals(p: Problem) -> dict:
    """Leximin node totals over all maximum flows, by sequential LPs."""
    E = list(p.edges)
    n = len(E)
    forms = {v: [k for k, e in enumerate(E) if v in e] for v in p.nodes}
    if not n:
        return {v: Fraction(0) for v in p.nodes}
    lam = n
    base = flow_constraints(p)
    base.append(({k: 1 for k in range(n)}, "=", lp_max_flow_value(p)))
    pinned: dict = {}
    active = list(p.nodes)
    while active:
        cons = list(base) + [({k: 1 for k in forms[v]}, "=", t) for v, t in pinned.items()]
        level, _ = simplex_max(n + 1, {lam: 1},
                               cons + [({lam: 1, **{k: -1 for k in forms[v]}}, "<=", 0) for v in active])
        floor = cons + [({k: 1 for k in forms[v]}, ">=", level) for v in active]
        keep = []
        for v in active:
            top, _ = simplex_max(n, {k: 1 for k in forms[v]}, floor) if forms[v] else (Fraction(0), None)
            if top > level:
                keep.append(v)
            else:
                pinned[v] = level
        active = keep
    return pinned
