"""Integer residual networks with exact rational front ends.

Rationals are scaled to integers by the lcm of their denominators before any
augmenting-path work, then scaled back.
"""
from __future__ import annotations

from collections import deque
from fractions import Fraction
from math import lcm


class InfeasibleError(RuntimeError):
    """The base system of a parametric solve has no feasible circulation."""


class ResidualNetwork:
    """Paired-arc residual graph; arc ``a`` and ``a ^ 1`` are mutual reverses."""

    __slots__ = ("n", "to", "cap", "adj")

    def __init__(self, n: int):
        self.n = n
        self.to: list[int] = []
        self.cap: list[int] = []
        self.adj: list[list[int]] = [[] for _ in range(n)]

    def add_arc(self, u: int, v: int, c: int) -> int:
        a = len(self.to)
        self.to += (v, u)
        self.cap += (c, 0)
        self.adj[u].append(a)
        self.adj[v].append(a + 1)
        return a

    def flow(self, a: int) -> int:
        return self.cap[a ^ 1]

    def tail(self, a: int) -> int:
        return self.to[a ^ 1]

    def max_flow(self, s: int, t: int) -> int:
        """Shortest augmenting paths; arcs are scanned in insertion order."""
        to, cap, adj = self.to, self.cap, self.adj
        total = 0
        while True:
            parent = [-1] * self.n
            parent[s] = -2
            queue = deque((s,))
            while queue and parent[t] == -1:
                u = queue.popleft()
                for a in adj[u]:
                    if cap[a] > 0:
                        v = to[a]
                        if parent[v] == -1:
                            parent[v] = a
                            queue.append(v)
            if parent[t] == -1:
                return total
            push = None
            v = t
            while v != s:
                a = parent[v]
                if push is None or cap[a] < push:
                    push = cap[a]
                v = to[a ^ 1]
            v = t
            while v != s:
                a = parent[v]
                cap[a] -= push
                cap[a ^ 1] += push
                v = to[a ^ 1]
            total += push

    def reachable(self, src: int, limit: int = None, skip: int = -1) -> list[bool]:
        """Nodes reachable from ``src`` along positive residual arcs.

        Nodes ``>= limit`` are never entered and arc ``skip`` is ignored.
        """
        limit = self.n if limit is None else limit
        to, cap, adj = self.to, self.cap, self.adj
        seen = [False] * self.n
        seen[src] = True
        stack = [src]
        while stack:
            u = stack.pop()
            for a in adj[u]:
                if cap[a] > 0 and a != skip:
                    v = to[a]
                    if v < limit and not seen[v]:
                        seen[v] = True
                        stack.append(v)
        return seen

    def reaching(self, dst: int, limit: int = None) -> list[bool]:
        """Nodes from which ``dst`` is reachable along positive residual arcs."""
        limit = self.n if limit is None else limit
        to, cap, adj = self.to, self.cap, self.adj
        seen = [False] * self.n
        seen[dst] = True
        stack = [dst]
        while stack:
            v = stack.pop()
            for b in adj[v]:
                # b runs v -> u; its partner b ^ 1 runs u -> v
                u = to[b]
                if cap[b ^ 1] > 0 and u < limit and not seen[u]:
                    seen[u] = True
                    stack.append(u)
        return seen


def scale_of(values) -> int:
    return lcm(1, *{v.denominator for v in values})


def scaled(q: Fraction, scale: int) -> int:
    return q.numerator * (scale // q.denominator)


class Circulation:
    """Feasibility of a circulation with lower and upper arc bounds.

    ``arcs`` is a list of ``(tail, head, lower, upper)`` with rational bounds
    on nodes ``0 .. n-1``.  After construction, ``deficit`` is zero iff a
    feasible circulation exists; then :meth:`flows` returns one.  Otherwise
    :attr:`cut` holds the node set ``X`` maximising
    ``lower(in X) - upper(out X)``, whose value equals ``deficit``.
    """

    def __init__(self, n: int, arcs):
        self.n = n
        self.arcs = arcs
        scale = scale_of([b for arc in arcs for b in arc[2:]])
        self.scale = scale
        net = ResidualNetwork(n + 2)
        source, sink = n, n + 1
        excess = [0] * n
        ids = []
        for u, v, lo, hi in arcs:
            lo_i = scaled(lo, scale)
            hi_i = scaled(hi, scale)
            if hi_i < lo_i:
                raise InfeasibleError(f"arc {u}->{v} has lower bound above upper bound")
            ids.append(net.add_arc(u, v, hi_i - lo_i))
            excess[v] += lo_i
            excess[u] -= lo_i
        need = 0
        for v in range(n):
            if excess[v] > 0:
                net.add_arc(source, v, excess[v])
                need += excess[v]
            elif excess[v] < 0:
                net.add_arc(v, sink, -excess[v])
        got = net.max_flow(source, sink)
        self.net = net
        self.ids = ids
        self.deficit = Fraction(need - got, scale)
        self._reach = {}

    @property
    def feasible(self) -> bool:
        return self.deficit == 0

    @property
    def cut(self) -> frozenset:
        seen = self.net.reachable(self.n)
        return frozenset(v for v in range(self.n) if seen[v])

    def flows(self) -> list[Fraction]:
        return [lo + Fraction(self.net.flow(a), self.scale)
                for (_, _, lo, _), a in zip(self.arcs, self.ids)]

    def can_increase(self, k: int) -> bool:
        """Whether arc ``k`` can carry more in some feasible circulation.

        Valid when arc ``k`` currently sits at its lower bound, so its own
        reverse residual is empty and any residual cycle through it is real.
        """
        a = self.ids[k]
        net = self.net
        if net.cap[a] <= 0:
            return False
        u, v = net.tail(a), net.to[a]
        if v not in self._reach:
            self._reach[v] = net.reachable(v, limit=self.n)
        return self._reach[v][u]


def max_parametric_lower(n: int, arcs, param, start: Fraction, floor: Fraction = Fraction(0)):
    """Largest ``lam <= start`` such that the circulation with lower bound
    ``lam`` on every arc in ``param`` is feasible.

    Discrete Newton from above: each infeasible step yields a violated cut
    ``X`` whose violation is affine in ``lam`` with slope equal to the number
    of parametric arcs entering ``X``; the next iterate is that cut's root.
    Returns ``(lam, Circulation)``.
    """
    param = frozenset(param)
    lam = Fraction(start)
    while True:
        bounds = [(u, v, lam if k in param else lo, hi) for k, (u, v, lo, hi) in enumerate(arcs)]
        circ = Circulation(n, bounds)
        if circ.feasible:
            return lam, circ
        X = circ.cut
        slope = 0
        const = Fraction(0)
        for k, (u, v, lo, hi) in enumerate(arcs):
            if u not in X and v in X:
                if k in param:
                    slope += 1
                else:
                    const += lo
            elif u in X and v not in X:
                const -= hi
        if slope == 0:
            raise InfeasibleError("no parametric level is feasible")
        root = -const / slope
        if root >= lam or root < floor:
            raise InfeasibleError(f"parametric search left its bracket at {root}")
        lam = root
