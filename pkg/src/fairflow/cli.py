"""Command-line front end.

Exit codes: 0 ok, 1 usage, 2 unreadable or malformed input, 3 an audit
failed, 4 a profitable deviation was found, 5 the search was truncated.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, TextIO

from . import axioms, strategic
from .axioms import AuditReport, Model, Verdict
from .core import Problem, ProblemFormatError, format_rational, lex_compare, lorenz_compare, \
    node_allocation, parse_problem, to_rational
from .fixtures import FIXTURES, load_fixture
from .flownet import decompose, extremal_min_cuts, fixed_edges, max_flow
from .mechanisms import MECHANISMS, get_mechanism

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_AUDIT, EXIT_DEVIATION, EXIT_TRUNCATED = range(6)

AXIOMS = ("consistency", "no-envy", "ete", "ranking", "invariance", "strong-invariance",
          "impossibility")
DEFAULT_AXIOMS = ("consistency", "no-envy", "ete", "ranking")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fairflow", description="Fair division of flows on bipartite networks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, mech=True):
        p.add_argument("input", help="problem file (JSON) or built-in fixture: " + ", ".join(FIXTURES))
        if mech:
            p.add_argument("--mech", choices=sorted(MECHANISMS), default=None,
                           help="mechanism (default edge-fair)")
        p.add_argument("--format", choices=("table", "json"), default="table")

    common(sub.add_parser("solve", help="run a mechanism and print flow, allocation and trace"))
    common(sub.add_parser("decompose", help="print the decomposition, fixed edges and min cuts"),
           mech=False)

    audit = sub.add_parser("audit", help="run axiom checks")
    common(audit)
    audit.add_argument("--axiom", action="append", choices=AXIOMS,
                       help="axiom to check; repeatable (default: " + ", ".join(DEFAULT_AXIOMS) + ")")
    audit.add_argument("--flow-from", choices=sorted(MECHANISMS), default=None,
                       help="mechanism whose flow is audited (default --mech)")
    audit.add_argument("--model", choices=[m.value for m in Model], default=Model.NODE.value)
    audit.add_argument("--grid-step", default="1/2", help="misreport grid step for invariance")

    attack = sub.add_parser("attack", help="search for a profitable coalition misreport")
    common(attack)
    attack.add_argument("--coalition", type=int, default=1, help="largest coalition of misreporters")
    attack.add_argument("--grid-step", default="1/2", help="misreport grid step")
    attack.add_argument("--model", choices=[m.value for m in Model], default=Model.NODE.value)
    attack.add_argument("--budget", type=int, default=1_000_000, help="maximum mechanism runs")

    compare = sub.add_parser("compare", help="run several mechanisms side by side")
    compare.add_argument("input", help="problem file (JSON) or built-in fixture")
    compare.add_argument("--mech", action="append", choices=sorted(MECHANISMS),
                         help="mechanism to include; repeatable (default: all)")
    compare.add_argument("--format", choices=("table", "json"), default="table")
    return parser


def load_input(source: str) -> Problem:
    path = Path(source)
    if path.is_file():
        try:
            text = path.read_text()
        except OSError as exc:
            raise ProblemFormatError(f"{source}: {exc.strerror}", key=source) from None
        try:
            return parse_problem(text)
        except ProblemFormatError as exc:
            raise ProblemFormatError(f"{source}: {exc}", key=exc.key) from None
    if source in FIXTURES:
        return load_fixture(source)
    raise ProblemFormatError(f"{source}: no such file or built-in fixture", key=source)


def _row(label: str, values) -> str:
    return f"{label:<10} " + " ".join(format_rational(v) for v in values)


def _emit(out: TextIO, doc, fmt: str, table_lines) -> None:
    if fmt == "json":
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write("\n".join(table_lines) + "\n")


def _grid_step(text: str) -> Fraction:
    try:
        step = to_rational(text)
    except ProblemFormatError:
        raise UsageError(f"invalid grid step {text!r}") from None
    if step <= 0:
        raise UsageError("grid step must be positive")
    return step


# -- commands -------------------------------------------------------------

def cmd_solve(args, out: TextIO) -> int:
    p = load_input(args.input)
    mech = get_mechanism(args.mech or "edge-fair")
    res = mech.fit(p).outcome_
    alloc = res.allocation
    lines = [f"mechanism  {mech.name}", f"value      {format_rational(res.flow.value)}",
             _row("suppliers", []) + " ".join(p.suppliers), _row("supply", alloc.supply_vector()),
             _row("demanders", []) + " ".join(p.demanders), _row("demand", alloc.demand_vector()),
             "flow"]
    lines += [f"  {i}->{j}  {format_rational(v)}" for (i, j), v in res.flow.items()]
    if res.decomposition is not None:
        d = res.decomposition
        lines.append("decomposition")
        for name in ("S_plus", "S_minus", "D_plus", "D_minus"):
            lines.append(f"  {name:<8} {' '.join(getattr(d, name))}")
    if res.note:
        lines.append(f"note       {res.note}")
    if res.trace:
        lines.append("trace")
        for t in res.trace:
            doc = t.to_dict()
            where = f"component {doc['component']} " if "component" in doc else ""
            gone = doc.get("deactivated", doc.get("frozen", []))
            lines.append(f"  {where}step {doc['step']}  lambda {doc['lambda']}  fixed {' '.join(gone)}")
    _emit(out, {"problem": p.to_dict(), **res.to_dict()}, args.format, lines)
    return EXIT_OK


def cmd_decompose(args, out: TextIO) -> int:
    p = load_input(args.input)
    flow, value = max_flow(p)
    d = decompose(p, flow)
    fixed = fixed_edges(p, flow)
    cuts = extremal_min_cuts(p, flow)
    doc = {"value": format_rational(value), "decomposition": d.to_dict(),
           "fixed_edges": [{"from": i, "to": j, "flow": format_rational(v)} for (i, j), v in fixed.items()],
           "min_cuts": {"smallest_source_side": sorted(cuts.smallest_source_side),
                        "largest_source_side": sorted(cuts.largest_source_side)}}
    lines = [f"value      {format_rational(value)}"]
    for name in ("S_plus", "S_minus", "D_plus", "D_minus"):
        lines.append(f"{name:<10} {' '.join(getattr(d, name))}")
    lines.append(f"cross_flow {format_rational(d.cross_flow)}")
    lines.append("fixed edges")
    lines += [f"  {i}->{j}  {format_rational(v)}" for (i, j), v in fixed.items()]
    lines.append(f"smallest source side  {' '.join(sorted(cuts.smallest_source_side))}")
    lines.append(f"largest source side   {' '.join(sorted(cuts.largest_source_side))}")
    _emit(out, doc, args.format, lines)
    return EXIT_OK


def _invariance_audit(mech, p: Problem, model: Model, step: Fraction, strong: bool) -> AuditReport:
    name = "strong-invariance" if strong else "invariance"
    check = strategic.check_strong_invariance if strong else strategic.check_invariance
    f = mech(p)
    truth = node_allocation(p, f).as_dict() if model is Model.NODE else dict(f.items())
    grid = strategic.misreport_grid(p, step, model, truth.values())
    agents = p.nodes if model is Model.NODE else p.edges
    tested = 0
    for a in agents:
        rep = check(mech, p, a, grid)
        if rep.verdict is Verdict.FAIL:
            return rep
        tested += rep.verdict is Verdict.PASS
    if not tested:
        return AuditReport(name, Verdict.INAPPLICABLE, details=("no agent has an admissible misreport",))
    return AuditReport(name, Verdict.PASS, details=(f"{tested} agents checked",))


def cmd_audit(args, out: TextIO) -> int:
    p = load_input(args.input)
    model = Model(args.model)
    mech = get_mechanism(args.mech or "edge-fair")
    source = get_mechanism(args.flow_from or args.mech or "edge-fair")
    chosen = list(dict.fromkeys(args.axiom or DEFAULT_AXIOMS))
    step = _grid_step(args.grid_step)
    reports: list[AuditReport] = []
    flow = None
    for name in chosen:
        if name in ("no-envy", "ete", "ranking") and flow is None:
            flow = source(p)
        if name == "consistency":
            reports.append(axioms.check_consistency(mech, p))
        elif name == "no-envy":
            reports.append(axioms.check_no_envy(p, flow, model))
        elif name == "ete":
            reports.append(axioms.check_ete(p, flow, model))
        elif name == "ranking":
            reports.append(axioms.check_ranking(p, flow))
        elif name in ("invariance", "strong-invariance"):
            reports.append(_invariance_audit(mech, p, model, step, name == "strong-invariance"))
        elif name == "impossibility":
            reports += axioms.impossibility_demo(mech if args.mech else None, p)
    lines = []
    for r in reports:
        lines.append(f"{r.verdict.value.upper():<13} {r.axiom}")
        for d in r.details:
            lines.append(f"    {d}")
        if r.witness is not None:
            lines.append("    witness " + json.dumps(r.witness, sort_keys=False))
    _emit(out, {"reports": [r.to_dict() for r in reports]}, args.format, lines)
    return EXIT_AUDIT if any(r.verdict is Verdict.FAIL for r in reports) else EXIT_OK


def cmd_attack(args, out: TextIO) -> int:
    p = load_input(args.input)
    if args.coalition < 0:
        raise UsageError("coalition bound must be nonnegative")
    mech = get_mechanism(args.mech or "edge-fair")
    rep = strategic.search_manipulation(mech, p, args.coalition, _grid_step(args.grid_step),
                                        Model(args.model), args.budget)
    lines = [f"mechanism    {mech.name}", f"evaluations  {rep.evaluations}"]
    if rep.deviation is None:
        lines.append("no deviation found")
    else:
        d = rep.deviation.to_dict()
        lines.append("deviation found")
        lines.append(f"  coalition  {' '.join(d['coalition'])}")
        for a, r in d["reported_peaks"].items():
            lines.append(f"  {a} reports {r} (true peak {_true_peak(p, a)})")
        for a in d["coalition"]:
            lines.append(f"  {a}: {d['outcome_true'][a]} -> {d['outcome_reported'][a]}"
                         f"  gain {d['improvement'][a]}")
    if rep.truncated:
        lines.append("TRUNCATED: budget exhausted before the grid was covered")
    _emit(out, rep.to_dict(), args.format, lines)
    if rep.found:
        return EXIT_DEVIATION
    return EXIT_TRUNCATED if rep.truncated else EXIT_OK


def _true_peak(p: Problem, key: str) -> str:
    if "->" in key:
        i, j = key.split("->")
        return format_rational(p.capacity[(i, j)])
    return format_rational(p.peak(key))


def cmd_compare(args, out: TextIO) -> int:
    p = load_input(args.input)
    names = list(dict.fromkeys(args.mech or sorted(MECHANISMS)))
    results = {n: get_mechanism(n).outcome(p) for n in names}
    width = max(len(n) for n in names)
    lines = [f"{'node':<{width}}  " + " ".join(p.nodes)]
    for n, res in results.items():
        lines.append(f"{n:<{width}}  " + " ".join(format_rational(v) for v in res.allocation.as_dict().values()))
    pairs = []
    for k, a in enumerate(names):
        for b in names[k + 1:]:
            fa, fb = results[a].flow, results[b].flow
            lex = lex_compare(fa, fb).value
            lorenz = lorenz_compare(list(fa.values()), list(fb.values())).value
            pairs.append({"a": a, "b": b, "edge_lex": lex, "edge_lorenz": lorenz})
            lines.append(f"{a} vs {b}: edge leximin {lex}, edge Lorenz {lorenz}")
    doc = {"mechanisms": {n: r.to_dict() for n, r in results.items()}, "comparisons": pairs}
    _emit(out, doc, args.format, lines)
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "decompose": cmd_decompose, "audit": cmd_audit,
            "attack": cmd_attack, "compare": cmd_compare}


def main(argv: Optional[list[str]] = None, out: Optional[TextIO] = None,
         err: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except ProblemFormatError as exc:
        where = f" (at {exc.key})" if exc.key is not None else ""
        err.write(f"parse error: {exc}{where}\n")
        return EXIT_PARSE
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
