"""Invariance checks and exhaustive search for profitable misreports.

Agents are nodes (peak = supply or demand) or, in edge mode, edges (peak =
capacity, ``None`` meaning unbounded).  Gains are judged only through the
peaks: an outcome counts as an improvement when some single-peaked preference
with the true peak ranks it above the truthful one (see
:mod:`fairflow.preferences`).
"""
from __future__ import annotations

import json
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import floor
from typing import Optional, Union

from .axioms import AuditReport, MechanismLike, Model, Verdict, as_flow
from .core import Edge, Problem, format_rational, node_allocation, to_rational
from .mechanisms import hybrid_mechanism
from .preferences import gain, may_prefer, may_weakly_prefer
from .validation import check_problem

Agent = Union[str, Edge]

__all__ = ["Deviation", "ManipulationReport", "check_invariance", "check_strong_invariance",
           "search_manipulation", "misreport_grid", "hybrid_mechanism"]


def _key(a: Agent) -> str:
    return a if isinstance(a, str) else f"{a[0]}->{a[1]}"


def _fmt(q) -> str:
    return format_rational(q)


class _View:
    """Uniform access to peaks, reports and outcomes for one agent model."""

    def __init__(self, p: Problem, model: Model):
        self.p = p
        self.model = model
        self.agents: tuple = p.nodes if model is Model.NODE else p.edges

    def peak(self, a):
        return self.p.peak(a) if self.model is Model.NODE else self.p.capacity[a]

    def report(self, reports: Mapping) -> Problem:
        if self.model is Model.NODE:
            return self.p.with_peaks(reports)
        return self.p.with_capacities(reports)

    def outcome(self, mech, q: Problem) -> dict:
        f = as_flow(mech(q))
        if self.model is Model.NODE:
            return node_allocation(q, f).as_dict()
        return dict(f.items())


@dataclass(frozen=True)
class Deviation:
    """A coalition whose misreport leaves every member weakly better off and
    one strictly better off.  Members outside ``reported_peaks`` report
    truthfully and ride along as beneficiaries."""

    coalition: tuple
    true_peaks: Mapping
    reported_peaks: Mapping
    outcome_true: Mapping
    outcome_reported: Mapping
    improvement: Mapping
    model: Model = Model.NODE

    @property
    def total_improvement(self) -> Fraction:
        return sum(self.improvement.values(), Fraction(0))

    def to_dict(self) -> dict:
        return {
            "model": self.model.value,
            "coalition": [_key(a) for a in self.coalition],
            "true_peaks": {_key(a): _fmt(v) for a, v in self.true_peaks.items()},
            "reported_peaks": {_key(a): _fmt(v) for a, v in self.reported_peaks.items()},
            "outcome_true": {_key(a): _fmt(v) for a, v in self.outcome_true.items()},
            "outcome_reported": {_key(a): _fmt(v) for a, v in self.outcome_reported.items()},
            "improvement": {_key(a): _fmt(v) for a, v in self.improvement.items()},
        }


@dataclass(frozen=True)
class ManipulationReport:
    deviation: Optional[Deviation]
    evaluations: int
    truncated: bool = False
    max_coalition: int = 0
    grid_sizes: Mapping = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.deviation is not None

    def to_dict(self) -> dict:
        doc = {"found": self.found, "evaluations": self.evaluations,
               "truncated": self.truncated, "max_coalition": self.max_coalition}
        if self.deviation is not None:
            doc["deviation"] = self.deviation.to_dict()
        if self.truncated:
            doc["notice"] = ("search budget exhausted before the grid was covered; "
                             "absence of a deviation is not established")
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def misreport_grid(p: Problem, step: Fraction = Fraction(1, 2), model: Union[Model, str] = Model.NODE,
                   extra: Iterable = ()) -> list[Fraction]:
    """Multiples of ``step`` in ``[0, 2 * max peak]`` plus ``extra`` values."""
    model = Model(model)
    step = to_rational(step) if not isinstance(step, Fraction) else step
    if step <= 0:
        raise ValueError("grid step must be positive")
    peaks = list(p.supply.values()) + list(p.demand.values())
    if model is Model.EDGE:
        peaks += [u for u in p.capacity.values() if u is not None]
    top = 2 * max(peaks, default=Fraction(0))
    values = {k * step for k in range(floor(top / step) + 1)}
    values.update(Fraction(v) for v in extra)
    return sorted(v for v in values if v >= 0)


def _hypothesis(peak, current, report) -> bool:
    """Misreport stays on the same side of the current allocation as the truth."""
    if peak is None:
        return report is None or report >= current
    if peak < current:
        return report <= current
    if peak > current:
        return report is None or report >= current
    return False


def _invariance(mech, p, agent, grid, strong: bool) -> AuditReport:
    check_problem(p)
    model = Model.NODE if isinstance(agent, str) else Model.EDGE
    view = _View(p, model)
    if agent not in view.agents:
        raise KeyError(f"unknown agent {_key(agent)!r}")
    name = "strong-invariance" if strong else "invariance"
    truth = view.outcome(mech, p)
    peak = view.peak(agent)
    tried = 0
    for r in grid:
        r = to_rational(r) if not isinstance(r, Fraction) else r
        if r == peak or not _hypothesis(peak, truth[agent], r):
            continue
        tried += 1
        got = view.outcome(mech, view.report({agent: r}))
        moved = [a for a in view.agents if got[a] != truth[a]] if strong else \
            ([agent] if got[agent] != truth[agent] else [])
        if moved:
            return AuditReport(name, Verdict.FAIL, {
                "agent": _key(agent), "true_peak": _fmt(peak), "report": _fmt(r),
                "allocation": _fmt(truth[agent]),
                "changed": {_key(a): [_fmt(truth[a]), _fmt(got[a])] for a in moved},
            })
    if not tried:
        return AuditReport(name, Verdict.INAPPLICABLE,
                           details=(f"no grid report satisfies the hypothesis for {_key(agent)}",))
    return AuditReport(name, Verdict.PASS, details=(f"{tried} misreports of {_key(agent)}",))


def check_invariance(mech: MechanismLike, p: Problem, agent: Agent, grid: Iterable) -> AuditReport:
    """A misreport on the same side of the agent's allocation as its peak must
    leave that allocation unchanged."""
    return _invariance(mech, p, agent, grid, strong=False)


def check_strong_invariance(mech: MechanismLike, p: Problem, agent: Agent, grid: Iterable) -> AuditReport:
    """As :func:`check_invariance`, but every agent's allocation must stay put."""
    return _invariance(mech, p, agent, grid, strong=True)


def search_manipulation(mech: MechanismLike, p: Problem, max_coalition: int = 2,
                        grid: Union[None, Fraction, Sequence] = None,
                        model: Union[Model, str] = Model.NODE,
                        budget: Optional[int] = 1_000_000) -> ManipulationReport:
    """Exhaustive search for a profitable coalition misreport.

    Every set of up to ``max_coalition`` misreporters and every combination of
    grid reports is tried.  If no misreporter gains strictly, the truthful
    agent with the largest strict gain may join when room remains.  Among
    successes the smallest coalition wins, then the largest total gain, then
    enumeration order.  ``grid`` is a step (default 1/2, with the truthful
    allocations added) or an explicit list of reports.  Reports below the
    reporter's truthful allocation are skipped: the outcome respects reports,
    so the reporter would end up strictly worse.
    """
    check_problem(p)
    model = Model(model)
    view = _View(p, model)
    truth = view.outcome(mech, p)
    count = 1
    if max_coalition <= 0 or not view.agents:
        return ManipulationReport(None, count, False, max_coalition)
    if grid is None or isinstance(grid, (Fraction, int, str)):
        step = Fraction(1, 2) if grid is None else to_rational(grid)
        values = misreport_grid(p, step, model, truth.values())
    else:
        values = sorted({to_rational(v) if not isinstance(v, Fraction) else v for v in grid})
    options = {a: [r for r in values if r >= truth[a] and r != view.peak(a)] for a in view.agents}
    peaks = {a: view.peak(a) for a in view.agents}
    order = {a: k for k, a in enumerate(view.agents)}

    best = None
    best_key = None
    seq = 0
    for size in range(1, max_coalition + 1):
        if best is not None and len(best.coalition) < size:
            break
        for members in combinations(view.agents, size):
            for reports in product(*(options[a] for a in members)):
                if budget is not None and count >= budget:
                    return ManipulationReport(best, count, True, max_coalition,
                                              {_key(a): len(v) for a, v in options.items()})
                seq += 1
                count += 1
                got = view.outcome(mech, view.report(dict(zip(members, reports))))
                if not all(may_weakly_prefer(peaks[a], got[a], truth[a]) for a in members):
                    continue
                if any(may_prefer(peaks[a], got[a], truth[a]) for a in members):
                    coalition = members
                elif size < max_coalition:
                    riders = [b for b in view.agents if b not in members
                              and may_prefer(peaks[b], got[b], truth[b])]
                    if not riders:
                        continue
                    rider = max(riders, key=lambda b: (gain(peaks[b], truth[b], got[b]), -order[b]))
                    coalition = tuple(sorted(members + (rider,), key=order.__getitem__))
                else:
                    continue
                gains = {a: gain(peaks[a], truth[a], got[a]) for a in coalition}
                key = (len(coalition), -sum(gains.values()), seq)
                if best_key is None or key < best_key:
                    best_key = key
                    best = Deviation(coalition, {a: peaks[a] for a in coalition},
                                     dict(zip(members, reports)),
                                     {a: truth[a] for a in coalition},
                                     {a: got[a] for a in coalition}, gains, model)
    return ManipulationReport(best, count, False, max_coalition,
                              {_key(a): len(v) for a, v in options.items()})
