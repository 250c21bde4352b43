from fractions import Fraction as F

from fairflow.preferences import gain, may_prefer, may_weakly_prefer, surely_prefers, toward


def test_same_side_closer_is_sure():
    assert surely_prefers(F(5), F(4), F(2))
    assert may_prefer(F(5), F(4), F(2))
    assert not may_prefer(F(5), F(2), F(4))


def test_opposite_sides_go_either_way():
    assert may_prefer(F(5), F(7), F(4)) and may_prefer(F(5), F(4), F(7))
    assert not surely_prefers(F(5), F(7), F(4))


def test_peak_beats_everything():
    assert surely_prefers(F(5), F(5), F(7))
    assert not may_prefer(F(5), F(7), F(5))
    assert may_weakly_prefer(F(5), F(5), F(5)) and not may_prefer(F(5), F(5), F(5))


def test_unbounded_peak_means_more():
    assert surely_prefers(None, F(3), F(2))
    assert not may_prefer(None, F(2), F(3))
    assert gain(None, F(2), F(3)) == 1


def test_gain_and_toward():
    assert gain(F(6), F(3), F(9, 2)) == F(3, 2)
    assert toward(F(5), F(2), F(0), F(3)) == 3
    assert toward(F(5), F(3), F(0), F(3)) is None
    assert toward(F(1), F(3), F(0), F(4)) == 1
