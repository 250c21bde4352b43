"""Built-in named problems used by the CLI and the test suite."""
from __future__ import annotations

from collections.abc import Callable

from .core import Problem


def fig1() -> Problem:
    """Eight suppliers and eight demanders splitting into a demander-rationed
    upper block and a supplier-rationed lower block."""
    supply = {"s1": 10, "s2": 8, "s3": 7, "s4": 3, "s5": 2, "s6": 2, "s7": 3, "s8": 3}
    demand = {"d1": 12, "d2": 12, "d3": 12, "d4": 12, "d5": "4/3", "d6": "4/3", "d7": 2, "d8": 2}
    edges = [
        ("s1", "d1"),
        ("s2", "d2"), ("s2", "d1"),
        ("s3", "d4"), ("s3", "d3"), ("s3", "d2"), ("s3", "d5"),
        ("s4", "d4"), ("s4", "d6"),
        ("s5", "d7"), ("s5", "d6"), ("s5", "d5"),
        ("s6", "d8"), ("s6", "d6"), ("s6", "d5"),
        ("s7", "d7"), ("s7", "d8"), ("s7", "d3", "1/2"),
        ("s8", "d8"), ("s8", "d7"), ("s8", "d4", "1/2"),
    ]
    return Problem.build(supply, demand, edges)


def fig2_left() -> Problem:
    return Problem.build({"s1": 3, "s2": 3}, {"d1": 2, "d2": 2},
                         [("s1", "d1"), ("s2", "d1"), ("s2", "d2")])


def fig2_right() -> Problem:
    """``fig2_left`` after dropping (s2, d2) with 2 units paid out."""
    return Problem.build({"s1": 3, "s2": 1}, {"d1": 2}, [("s1", "d1"), ("s2", "d1")])


def fig3() -> Problem:
    return Problem.build({"s0": 4, "s1": 6, "s2": 6}, {"d0": 6, "d1": 3, "d2": 3},
                         [("s0", "d0"), ("s1", "d1"), ("s1", "d2"), ("s2", "d2")])


def fig4() -> Problem:
    """Unit peaks and capacities where a Pareto flow need not be a max-flow."""
    return Problem.build({"a": 1, "b": 1}, {"c": 1, "d": 1},
                         [("a", "c", 1), ("a", "d", 1), ("b", "d", 1)])


def fig5() -> Problem:
    return Problem.build({"s1": 3, "s2": "6.1"}, {"d1": "4.4", "d2": "6.6"},
                         [("s1", "d1"), ("s1", "d2"), ("s2", "d1"), ("s2", "d2")])


FIXTURES: dict[str, Callable[[], Problem]] = {
    "fig1": fig1,
    "fig2-left": fig2_left,
    "fig2-right": fig2_right,
    "fig3": fig3,
    "fig4": fig4,
    "fig5": fig5,
}


def load_fixture(name: str) -> Problem:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}") from None
