from fractions import Fraction as F

import pytest

from conftest import e01, e1inf
from msploc.graph import Edge, EdgeClass, Level
from msploc.weights import (
    BundleWeights, WeightError, edge_tangent_weights, l1_weight_at_inf, linearization_exponent,
    orbifold_exponent, vertex_bundle_weights,
)


def w(edge):
    t = edge_tangent_weights(edge)
    return (t.at_low, t.at_inf_or_high)


def test_linearization_examples():
    assert linearization_exponent(0, -1, 1) == 1
    assert linearization_exponent(0, -1, 3) == F(1, 3)
    assert linearization_exponent(-1, F(-1, 4), 1) == F(-3, 4)
    with pytest.raises(WeightError, match="degenerate"):
        linearization_exponent(0, 1, 0)


def test_orbifold_examples():
    assert orbifold_exponent(3, 0, 1) == 1
    assert orbifold_exponent(0, -1, 1) == F(1, 3)
    assert orbifold_exponent(1, 1, 5) == 0
    with pytest.raises(WeightError):
        orbifold_exponent(1, 0, 0)


def test_bundle_weights():
    assert vertex_bundle_weights(Level.ZERO) == BundleWeights(0, 0, 0)
    assert vertex_bundle_weights(Level.ONE) == BundleWeights(-1, 0, 0)
    at_inf = vertex_bundle_weights(Level.INF)
    assert at_inf.wL1 is None and at_inf.wL2 == 0
    pinned = at_inf.pinned(F(2, 3))
    assert pinned.wL1 + pinned.wN == -1
    for lv in Level:
        assert vertex_bundle_weights(lv).satisfies(lv)
    assert not BundleWeights(F(0), F(0), F(0)).satisfies(Level.ONE)


def test_table_examples():
    assert w(e01("e", "a", "b", 2)) == (F(1, 2), F(-1, 2))
    assert w(e1inf("e", "a", "b", -1, special=False)) == (F(3, 2), F(-3, 2))
    assert w(e1inf("e", "a", "b", -1, special=True, orbifold=True)) == (1, F(-1, 3))
    orb = Edge("e", "a", "b", EdgeClass.E0INF, F(1), F(1), True, True)
    assert w(orb) == (1, F(-1, 3))


def test_e1inf_four_cases():
    d = F(-2)
    assert w(e1inf("e", "a", "b", d, special=False)) == (F(3, 5), F(-3, 5))
    assert w(e1inf("e", "a", "b", d, special=False, orbifold=True)) == (F(3, 5), F(-1, 5))
    assert w(e1inf("e", "a", "b", d, special=True)) == (F(1, 2), F(-1, 2))
    assert w(e1inf("e", "a", "b", d, special=True, orbifold=True)) == (F(1, 2), F(-1, 6))


def test_weight_pole():
    with pytest.raises(WeightError, match="weight pole"):
        edge_tangent_weights(e1inf("e", "a", "b", F(-1, 3), special=False, orbifold=True))


def test_l1_weight_at_inf():
    # k = 1/2 at the level-1 end, d = -2: -1 - (1/2)(-2) = 0
    assert l1_weight_at_inf(e1inf("e", "a", "b", -2, special=True)) == 0
    with pytest.raises(WeightError):
        l1_weight_at_inf(e01("e", "a", "b", 1))
