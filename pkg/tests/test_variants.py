import math

import pytest

from timevortex.errors import InvalidParams, WindowTooShort
from timevortex.variants import (
    IdleParams, RepetitionSpec, ToricSpec, idle_tradeoff, repetition_distance, toric_distance,
)


@pytest.mark.parametrize("Q,n,D", [(16, 0, 16), (16, 1, 17), (4, 0, 4)])
def test_repetition_examples(Q, n, D):
    assert repetition_distance(RepetitionSpec(Q, Q + 4, n)) == D


@pytest.mark.parametrize("Q", range(4, 21, 2))
def test_repetition_vortex_adds_one(Q):
    base = repetition_distance(RepetitionSpec(Q, Q + 4, 0))
    assert base == Q
    assert repetition_distance(RepetitionSpec(Q, Q + 4, 1)) == base + 1
    assert repetition_distance(RepetitionSpec(Q, Q + 4, -1)) == base + 1


def test_repetition_window_and_params():
    with pytest.raises(WindowTooShort):
        repetition_distance(RepetitionSpec(8, 1, 1))
    for bad in [(3, 4, 0), (5, 4, 0), (4, 0, 0), (4, 4, 2)]:
        with pytest.raises(InvalidParams):
            RepetitionSpec(*bad)


def test_toric_examples():
    assert toric_distance(ToricSpec(4, 4, 10), include_diagonals=False) == 4
    base = toric_distance(ToricSpec(4, 4, 12))
    assert toric_distance(ToricSpec(4, 4, 12, 1)) > base
    assert toric_distance(ToricSpec(4, 4, 12, -1)) <= base


@pytest.mark.parametrize("Lx", range(3, 9))
def test_toric_asymmetry(Lx):
    R = 2 * Lx + 4
    base = toric_distance(ToricSpec(Lx, Lx, R))
    assert base == Lx
    assert toric_distance(ToricSpec(Lx, Lx, R, 1)) > base
    assert toric_distance(ToricSpec(Lx, Lx, R, -1)) <= base


def test_toric_params():
    with pytest.raises(InvalidParams):
        ToricSpec(1, 4, 4)
    with pytest.raises(InvalidParams):
        ToricSpec(4, 4, 0)


def test_tradeoff_examples():
    r = idle_tradeoff(IdleParams(0.01, 0.0, 1.0, 1.0, 7))
    assert r.base == 0.01 and r.exponent == 3.5
    assert idle_tradeoff(IdleParams(0.01, 0.1, 1.0, 1.0, 5)).beneficial
    assert not idle_tradeoff(IdleParams(0.9, 0.1, 0.1, 1.0, 5)).beneficial
    with pytest.raises(InvalidParams):
        IdleParams(1.0, 0.1, 1, 1, 1)
    with pytest.raises(InvalidParams):
        IdleParams(0.1, -0.1, 1, 1, 1)


@pytest.mark.parametrize("p,y,z", [(0.01, 1, 1), (0.001, 0.2, 3), (0.3, 2, 1), (0.05, 0.5, 2)])
def test_tradeoff_first_order_sign(p, y, z):
    D0 = 9

    def lograte(alpha):
        r = idle_tradeoff(IdleParams(p, alpha, y, z, D0))
        return r.exponent * math.log(r.base)

    h = 1e-6
    slope = (lograte(h) - lograte(0)) / h
    assert slope == pytest.approx(D0 / 2 * (y * math.log(p) + z), rel=1e-3)
    assert (slope < 0) == idle_tradeoff(IdleParams(p, 0.1, y, z, D0)).beneficial
