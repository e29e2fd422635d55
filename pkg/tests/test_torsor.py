from math import gcd

import pytest
from hypothesis import given, strategies as st

from fmcalc.errors import FMCalcError, IncompatibleTorsorClasses
from fmcalc.torsor import (
    AutModel,
    TorsorGroup,
    check_witness,
    derived_equivalent,
    element_order,
    pic_class,
)


def brute_order(value, n):
    k = 1
    while (k * value) % n:
        k += 1
    return k


def brute_equivalent(x, y, n, units):
    """Orbit of y under units and every a < 2n prime to the additive order of y."""
    oy = brute_order(y, n)
    return any(
        (s * a * y - x) % n == 0
        for s in units
        for a in range(1, 2 * n + 1)
        if gcd(a, oy) == 1
    )


@pytest.mark.parametrize("value,n,expected", [(2, 6, 3), (0, 6, 1), (1, 5, 5)])
def test_element_order_examples(value, n, expected):
    assert element_order(TorsorGroup(n).cls(value)) == expected
    assert brute_order(value, n) == expected


@pytest.mark.parametrize("n", range(1, 25))
def test_element_order_matches_enumeration(n):
    G = TorsorGroup(n)
    for c in G.elements():
        assert element_order(c) == brute_order(c.value, n)


def test_pic_class():
    g = TorsorGroup(6).generator()
    assert pic_class(g, 2).value == 2
    assert pic_class(g, 0).value == 0
    assert pic_class(g, 7).value == 1
    assert pic_class(TorsorGroup(6).cls(4), 0) == TorsorGroup(6).cls(0)


def test_order_six_pic_two_not_equivalent():
    G = TorsorGroup(6)
    dec = derived_equivalent(G.cls(1), G.cls(2), AutModel.pm1(6))
    assert not dec.equivalent
    assert dec.witness is None


def test_identity_witness():
    G = TorsorGroup(9)
    for c in G.elements():
        assert derived_equivalent(c, c, AutModel.pm1(9)).witness == (1, 1)


def test_order_five_witness():
    G = TorsorGroup(5)
    dec = derived_equivalent(G.cls(1), G.cls(2), AutModel.from_list(5, [1, 4]))
    assert dec.equivalent and dec.witness == (1, 3)


def test_default_aut_is_pm1():
    G = TorsorGroup(6)
    assert derived_equivalent(G.cls(1), G.cls(5)) == derived_equivalent(
        G.cls(1), G.cls(5), AutModel.pm1(6)
    )


def test_trivial_group():
    G = TorsorGroup(1)
    assert derived_equivalent(G.cls(0), G.cls(0), AutModel.pm1(1)).equivalent


def test_mismatched_groups():
    with pytest.raises(IncompatibleTorsorClasses):
        derived_equivalent(TorsorGroup(6).cls(1), TorsorGroup(5).cls(1))
    with pytest.raises(IncompatibleTorsorClasses):
        derived_equivalent(TorsorGroup(6).cls(1), TorsorGroup(6).cls(1), AutModel.pm1(5))


@pytest.mark.parametrize("bad", [[1, 2], [2], [5, 3]])
def test_aut_model_validation(bad):
    with pytest.raises(FMCalcError):
        AutModel.from_list(6, bad)


def test_aut_model_needs_inverse_closure():
    with pytest.raises(FMCalcError):
        AutModel.from_list(7, [1, 3])  # 3^-1 = 5 mod 7
    assert AutModel.from_list(7, [1, 3, 5]).multipliers == {1, 3, 5}


def test_invalid_class_and_group():
    with pytest.raises(FMCalcError):
        TorsorGroup(0)
    from fmcalc.torsor import TorsorClass

    with pytest.raises(FMCalcError):
        TorsorClass(6, TorsorGroup(6))


def _unit_sets(n):
    units = [u for u in range(n) if gcd(u, n) == 1] or [0]
    closed = {frozenset({1 % n, (-1) % n}), frozenset(units), frozenset({1 % n})}
    return [AutModel(n, s) for s in closed]


@pytest.mark.parametrize("n", range(1, 25))
def test_against_brute_force(n):
    G = TorsorGroup(n)
    for aut in _unit_sets(n):
        for x in G.elements():
            for y in G.elements():
                dec = derived_equivalent(x, y, aut)
                assert dec.equivalent == brute_equivalent(x.value, y.value, n, aut.multipliers)
                if dec.equivalent:
                    assert check_witness(x, y, dec)
                    assert element_order(x) == element_order(y)


@given(n=st.integers(1, 40), data=st.data())
def test_symmetry_and_aut_invariance(n, data):
    G = TorsorGroup(n)
    x = G.cls(data.draw(st.integers(0, n - 1)))
    y = G.cls(data.draw(st.integers(0, n - 1)))
    aut = AutModel.pm1(n)
    e = derived_equivalent(x, y, aut).equivalent
    assert derived_equivalent(y, x, aut).equivalent == e
    for s in aut.multipliers:
        assert derived_equivalent(x.scaled(s), y, aut).equivalent == e
