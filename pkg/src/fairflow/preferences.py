"""Comparisons induced by a reported peak alone.

Checkers never see full single-peaked preferences, only peaks.  Allocation
``a`` *may* be preferred to ``b`` when some single-peaked preference with the
given peak ranks ``a`` above ``b``: that holds unless ``a`` lies on the same
side of the peak as ``b`` and farther from it.  Points on opposite sides are
ranked either way depending on the preference, so both directions count.
A peak of ``None`` is unbounded: more is always better.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Optional


def may_prefer(peak: Optional[Fraction], a: Fraction, b: Fraction) -> bool:
    """Whether some single-peaked preference with ``peak`` has ``a`` strictly above ``b``."""
    if a == b:
        return False
    if peak is None:
        return a > b
    if a == peak:
        return True
    if b == peak:
        return False
    if (a - peak) * (b - peak) < 0:
        return True
    return abs(a - peak) < abs(b - peak)


def may_weakly_prefer(peak: Optional[Fraction], a: Fraction, b: Fraction) -> bool:
    return a == b or may_prefer(peak, a, b)


def surely_prefers(peak: Optional[Fraction], a: Fraction, b: Fraction) -> bool:
    """Whether every single-peaked preference with ``peak`` has ``a`` strictly above ``b``."""
    if a == b:
        return False
    if peak is None:
        return a > b
    if a == peak:
        return True
    if (a - peak) * (b - peak) <= 0:
        return False
    return abs(a - peak) < abs(b - peak)


def gain(peak: Optional[Fraction], before: Fraction, after: Fraction) -> Fraction:
    """Signed reduction in distance to the peak when moving from ``before`` to ``after``."""
    if peak is None:
        return after - before
    return abs(before - peak) - abs(after - peak)


def toward(peak: Optional[Fraction], current: Fraction, lo: Fraction, hi: Fraction) -> Optional[Fraction]:
    """The point of ``[lo, hi]`` closest to ``peak`` if it beats ``current``
    under some preference, else ``None``."""
    if peak is None:
        best = hi
    else:
        best = min(max(peak, lo), hi)
    return best if may_prefer(peak, best, current) else None
