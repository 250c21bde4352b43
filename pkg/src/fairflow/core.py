"""Exact data model for bipartite supply/demand networks.

All quantities are :class:`fractions.Fraction`; nothing in the package ever
rounds.  An edge capacity of ``None`` means *unbounded*.
"""
from __future__ import annotations

import enum
import json
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate
from typing import Optional, Union

Rational = Fraction
Edge = tuple[str, str]
Number = Union[int, str, Fraction]

INF_TOKENS = frozenset({"inf", "infinity", "unbounded"})


class ProblemFormatError(ValueError):
    """Raised for malformed problem documents; ``key`` names the offender."""

    def __init__(self, message: str, key: object = None):
        super().__init__(message)
        self.key = key


def to_rational(value: Number, key: object = None) -> Fraction:
    """Convert an int, decimal/fraction string or Fraction exactly.

    Floats are rejected: their binary expansion is not what the user typed.
    """
    if isinstance(value, bool):
        raise ProblemFormatError(f"{key}: boolean is not a quantity", key)
    if type(value) is Fraction:
        return value
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ProblemFormatError(f"{key}: cannot parse {value!r} as a rational", key) from None
    raise ProblemFormatError(f"{key}: unsupported numeric value {value!r}", key)


def format_rational(q: Optional[Fraction]) -> str:
    if q is None:
        return "inf"
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Problem:
    """A bipartite flow problem ``(G, s, d, u)``.

    ``supply`` and ``demand`` hold the peaks of the suppliers and demanders,
    ``capacity`` maps every edge to a bound or ``None`` (unbounded).  Node ids
    are opaque strings and every output follows declaration order.
    """

    suppliers: tuple[str, ...]
    demanders: tuple[str, ...]
    supply: Mapping[str, Fraction]
    demand: Mapping[str, Fraction]
    edges: tuple[Edge, ...]
    capacity: Mapping[Edge, Optional[Fraction]]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        index = {"edge": {e: k for k, e in enumerate(self.edges)}}
        nodes = {}
        for k, i in enumerate(self.suppliers):
            nodes[i] = ("S", k)
        for k, j in enumerate(self.demanders):
            nodes[j] = ("D", k)
        index["node"] = nodes
        out = {i: [] for i in self.suppliers}
        inc = {j: [] for j in self.demanders}
        for e in self.edges:
            out.setdefault(e[0], []).append(e)
            inc.setdefault(e[1], []).append(e)
        index["out"] = {i: tuple(v) for i, v in out.items()}
        index["in"] = {j: tuple(v) for j, v in inc.items()}
        object.__setattr__(self, "_index", index)

    @classmethod
    def build(cls, supply: Mapping[str, Number], demand: Mapping[str, Number],
              edges: Iterable, capacity: Optional[Mapping] = None) -> "Problem":
        """Convenience constructor; ``edges`` may be pairs or (i, j, cap) triples."""
        from .validation import check_problem

        capacity = dict(capacity or {})
        pairs = []
        for e in edges:
            if len(e) == 3:
                capacity[(e[0], e[1])] = e[2]
            pairs.append((e[0], e[1]))
        caps = {}
        for e in pairs:
            u = capacity.get(e)
            if isinstance(u, str) and u.strip().lower() in INF_TOKENS:
                u = None
            caps[e] = None if u is None else to_rational(u, e)
        return check_problem(cls(
            suppliers=tuple(supply),
            demanders=tuple(demand),
            supply={i: to_rational(v, i) for i, v in supply.items()},
            demand={j: to_rational(v, j) for j, v in demand.items()},
            edges=tuple(pairs),
            capacity=caps,
        ))

    # -- neighbourhoods -------------------------------------------------
    def is_supplier(self, node: str) -> bool:
        return self._index["node"][node][0] == "S"

    def has_node(self, node: str) -> bool:
        return node in self._index["node"]

    def has_edge(self, e: Edge) -> bool:
        return e in self._index["edge"]

    def edge_index(self, e: Edge) -> int:
        return self._index["edge"][e]

    def out_edges(self, i: str) -> tuple[Edge, ...]:
        return self._index["out"][i]

    def in_edges(self, j: str) -> tuple[Edge, ...]:
        return self._index["in"][j]

    def incident(self, node: str) -> tuple[Edge, ...]:
        return self.out_edges(node) if self.is_supplier(node) else self.in_edges(node)

    def f(self, i: str) -> frozenset:
        """Demanders compatible with supplier ``i``."""
        return frozenset(j for _, j in self.out_edges(i))

    def g(self, j: str) -> frozenset:
        """Suppliers compatible with demander ``j``."""
        return frozenset(i for i, _ in self.in_edges(j))

    @property
    def nodes(self) -> tuple[str, ...]:
        return self.suppliers + self.demanders

    def peak(self, node: str) -> Fraction:
        return self.supply[node] if self.is_supplier(node) else self.demand[node]

    def cap(self, e: Edge) -> Fraction:
        """Effective capacity; unbounded edges are cut to ``min(s_i, d_j)``."""
        u = self.capacity[e]
        bound = min(self.supply[e[0]], self.demand[e[1]])
        return bound if u is None else min(u, bound)

    # -- derived problems -----------------------------------------------
    def with_peak(self, node: str, value: Number) -> "Problem":
        value = to_rational(value, node)
        if self.is_supplier(node):
            return self._replace(supply={**self.supply, node: value})
        return self._replace(demand={**self.demand, node: value})

    def with_peaks(self, reports: Mapping[str, Number]) -> "Problem":
        supply = dict(self.supply)
        demand = dict(self.demand)
        for node, value in reports.items():
            (supply if self.is_supplier(node) else demand)[node] = to_rational(value, node)
        return self._replace(supply=supply, demand=demand)

    def with_capacity(self, e: Edge, value: Optional[Number]) -> "Problem":
        u = None if value is None else to_rational(value, e)
        return self._replace(capacity={**self.capacity, e: u})

    def with_capacities(self, reports: Mapping[Edge, Optional[Number]]) -> "Problem":
        caps = dict(self.capacity)
        for e, value in reports.items():
            caps[e] = None if value is None else to_rational(value, e)
        return self._replace(capacity=caps)

    def reduced(self, e: Edge, amount: Number) -> "Problem":
        """Drop edge ``e`` and debit ``amount`` from both of its endpoints."""
        from .validation import check_problem

        amount = to_rational(amount, e)
        i, j = e
        return check_problem(Problem(
            suppliers=self.suppliers,
            demanders=self.demanders,
            supply={**self.supply, i: self.supply[i] - amount},
            demand={**self.demand, j: self.demand[j] - amount},
            edges=tuple(x for x in self.edges if x != e),
            capacity={x: u for x, u in self.capacity.items() if x != e},
        ))

    def relabeled(self, mapping: Mapping[str, str],
                  supplier_order: Optional[Iterable[str]] = None,
                  demander_order: Optional[Iterable[str]] = None) -> "Problem":
        """Rename nodes (``mapping`` old -> new) and optionally reorder them."""
        m = lambda v: mapping.get(v, v)
        suppliers = tuple(supplier_order) if supplier_order is not None else tuple(map(m, self.suppliers))
        demanders = tuple(demander_order) if demander_order is not None else tuple(map(m, self.demanders))
        edges = tuple((m(i), m(j)) for i, j in self.edges)
        return Problem(
            suppliers=suppliers,
            demanders=demanders,
            supply={m(i): v for i, v in self.supply.items()},
            demand={m(j): v for j, v in self.demand.items()},
            edges=edges,
            capacity={(m(i), m(j)): u for (i, j), u in self.capacity.items()},
        )

    def subproblem(self, suppliers: Iterable[str], demanders: Iterable[str],
                   edges: Iterable[Edge], supply: Mapping[str, Fraction],
                   demand: Mapping[str, Fraction]) -> "Problem":
        edges = tuple(edges)
        return Problem(tuple(suppliers), tuple(demanders), dict(supply), dict(demand),
                       edges, {e: self.capacity[e] for e in edges})

    def _replace(self, **changes) -> "Problem":
        fields = dict(suppliers=self.suppliers, demanders=self.demanders, supply=self.supply,
                      demand=self.demand, edges=self.edges, capacity=self.capacity)
        fields.update(changes)
        return Problem(**fields)

    # -- serialization ----------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "suppliers": [{"id": i, "peak": format_rational(self.supply[i])} for i in self.suppliers],
            "demanders": [{"id": j, "peak": format_rational(self.demand[j])} for j in self.demanders],
            "edges": [{"from": i, "to": j, "cap": format_rational(self.capacity[(i, j)])}
                      for i, j in self.edges],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


class Flow(Mapping):
    """Per-edge transfer amounts, ordered like the edges they were built from."""

    __slots__ = ("_values",)

    def __init__(self, values: Union[Mapping[Edge, Number], Iterable[tuple[Edge, Number]]] = ()):
        items = values.items() if isinstance(values, Mapping) else values
        self._values = {tuple(e): to_rational(v, e) for e, v in items}

    @classmethod
    def zeros(cls, edges: Iterable[Edge]) -> "Flow":
        return cls((e, 0) for e in edges)

    def __getitem__(self, e: Edge) -> Fraction:
        return self._values[tuple(e)]

    def __iter__(self) -> Iterator[Edge]:
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def __eq__(self, other) -> bool:
        if isinstance(other, Mapping):
            return dict(self._values) == {tuple(e): v for e, v in other.items()}
        return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        body = ", ".join(f"{i}->{j}: {format_rational(v)}" for (i, j), v in self._values.items())
        return f"Flow({{{body}}})"

    def values_sorted(self) -> list[Fraction]:
        return sorted(self._values.values())

    def restrict(self, edges: Iterable[Edge]) -> "Flow":
        return Flow((e, self._values[e]) for e in edges)

    @property
    def value(self) -> Fraction:
        return sum(self._values.values(), Fraction(0))

    def to_dict(self) -> list:
        return [{"from": i, "to": j, "flow": format_rational(v)} for (i, j), v in self._values.items()]


@dataclass(frozen=True)
class Allocation:
    """Net transfers ``x`` (suppliers) and ``y`` (demanders)."""

    x: Mapping[str, Fraction]
    y: Mapping[str, Fraction]

    def __getitem__(self, node: str) -> Fraction:
        return self.x[node] if node in self.x else self.y[node]

    def supply_vector(self) -> tuple[Fraction, ...]:
        return tuple(self.x.values())

    def demand_vector(self) -> tuple[Fraction, ...]:
        return tuple(self.y.values())

    def as_dict(self) -> dict[str, Fraction]:
        return {**self.x, **self.y}

    def to_dict(self) -> dict:
        return {"x": {k: format_rational(v) for k, v in self.x.items()},
                "y": {k: format_rational(v) for k, v in self.y.items()}}


class Dominance(str, enum.Enum):
    A = "a-dominates"
    B = "b-dominates"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def lex_compare(a: Mapping[Edge, Fraction], b: Mapping[Edge, Fraction]) -> Dominance:
    """Leximin comparison of two flows on the same edge set.

    Values are sorted ascending and the first differing coordinate decides;
    the k-th smallest entries may sit on different edges.
    """
    if set(a) != set(b):
        raise ValueError("flows are defined on different edge sets")
    return _lex_vectors(list(a.values()), list(b.values()))


def _lex_vectors(a, b) -> Dominance:
    for p, q in zip(sorted(a), sorted(b)):
        if p != q:
            return Dominance.A if p > q else Dominance.B
    return Dominance.EQUAL


def lorenz_compare(a: Iterable[Number], b: Iterable[Number]) -> Dominance:
    """Prefix-sum comparison of ascending-sorted vectors.

    Vectors of different length or total are labelled incomparable.
    """
    a = sorted(to_rational(v) for v in a)
    b = sorted(to_rational(v) for v in b)
    if len(a) != len(b) or sum(a) != sum(b):
        return Dominance.INCOMPARABLE
    ge = le = True
    for pa, pb in zip(accumulate(a), accumulate(b)):
        ge &= pa >= pb
        le &= pa <= pb
    if ge and le:
        return Dominance.EQUAL
    if ge:
        return Dominance.A
    if le:
        return Dominance.B
    return Dominance.INCOMPARABLE


def node_allocation(p: Problem, f: Mapping[Edge, Fraction]) -> Allocation:
    """Row and column sums of ``f``."""
    x = {i: sum((f[e] for e in p.out_edges(i)), Fraction(0)) for i in p.suppliers}
    y = {j: sum((f[e] for e in p.in_edges(j)), Fraction(0)) for j in p.demanders}
    return Allocation(x, y)


def parse_problem(text: str) -> Problem:
    """Parse a JSON problem document.

    Numbers are read from their literal text, so ``6.1`` becomes ``61/10``.
    """
    try:
        doc = json.loads(text, parse_float=str, parse_int=str)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}",
                                 key=f"line {exc.lineno}") from None
    return problem_from_dict(doc)


def problem_from_dict(doc) -> Problem:
    from .validation import check_problem

    if not isinstance(doc, dict):
        raise ProblemFormatError("problem document must be an object", key="<root>")
    for name in ("suppliers", "demanders", "edges"):
        if not isinstance(doc.get(name), list):
            raise ProblemFormatError(f"field {name!r} must be a list", key=name)

    def nodes(side):
        peaks = {}
        for k, item in enumerate(doc[side]):
            if not isinstance(item, dict) or "id" not in item or "peak" not in item:
                raise ProblemFormatError(f"{side}[{k}] needs 'id' and 'peak'", key=f"{side}[{k}]")
            node = str(item["id"])
            if node in peaks:
                raise ProblemFormatError(f"duplicate node id {node!r}", key=node)
            peaks[node] = to_rational(item["peak"], node)
        return peaks

    supply = nodes("suppliers")
    demand = nodes("demanders")
    edges, caps = [], {}
    for k, item in enumerate(doc["edges"]):
        if not isinstance(item, dict) or "from" not in item or "to" not in item:
            raise ProblemFormatError(f"edges[{k}] needs 'from' and 'to'", key=f"edges[{k}]")
        e = (str(item["from"]), str(item["to"]))
        raw = item.get("cap", "inf")
        if isinstance(raw, str) and raw.strip().lower() in INF_TOKENS:
            cap = None
        else:
            cap = to_rational(raw, f"{e[0]}->{e[1]}")
        if e in caps:
            raise ProblemFormatError(f"duplicate edge {e[0]}->{e[1]}", key=f"{e[0]}->{e[1]}")
        edges.append(e)
        caps[e] = cap
    return check_problem(Problem(tuple(supply), tuple(demand), supply, demand, tuple(edges), caps))
