from fractions import Fraction
from itertools import combinations_with_replacement, product

import pytest
from hypothesis import given, settings, strategies as st

from fmcalc.chow import (
    REJECTED,
    ChowElement,
    DivisorClass,
    Graph,
    IntersectionTable,
    Point,
    ProductSpace,
    Tridiag,
    all_normal_forms,
    degree,
    fiber_restrict,
    monomial,
    multiply,
    parse_divisor,
    parse_element,
    power_degree,
    rewrite_normal_form,
)
from fmcalc.errors import FMCalcError, TableError, UnsupportedProduct

PAIR = ProductSpace.of_size(2)
TRIPLE = ProductSpace.of_size(3)
G01, G02, G12 = Graph(0, 1), Graph(0, 2), Graph(1, 2)
P0, P1, P2 = Point(0), Point(1), Point(2)
T012 = Tridiag(0, 1, 2)

# Hand-computed intersection numbers (graph meets both rulings once, graph^2 = 0).
PAIR_NUMBERS = {frozenset({G01, P0}): 1, frozenset({G01, P1}): 1, frozenset({P0, P1}): 1}
TRIPLE_NUMBERS = {
    frozenset({G01, G12, P0}): 1,
    frozenset({G01, G12, P1}): 1,
    frozenset({G01, G12, P2}): 1,
    frozenset({G01, P0, P1}): 0,
    frozenset({G01, P0, P2}): 1,
    frozenset({G01, P1, P2}): 1,
    frozenset({G12, P0, P1}): 1,
    frozenset({G12, P0, P2}): 1,
    frozenset({G12, P1, P2}): 0,
    frozenset({P0, P1, P2}): 1,
}


def oracle_power(coeffs, n, numbers):
    """deg(D^n) by ordered expansion against a table of square-free numbers."""
    total = 0
    for gens in product(coeffs, repeat=n):
        if len(set(gens)) < n:
            continue  # every generator squares to zero in this table
        c = 1
        for g in gens:
            c *= coeffs[g]
        total += c * numbers[frozenset(gens)]
    return total


def test_oracle_reproduces_hand_values():
    assert oracle_power({G01: 1, P1: 2}, 2, PAIR_NUMBERS) == 4
    assert oracle_power({G01: 1, P1: 1, G12: 1, P2: 2}, 3, TRIPLE_NUMBERS) == 30


def test_square_example_d3():
    D = ChowElement(PAIR, {(G01,): 1, (P1,): 2})
    assert D * D == ChowElement(PAIR, {(P0, P1): 4})


def test_basic_products():
    p0 = ChowElement.generator(PAIR, P0)
    g = ChowElement.generator(PAIR, G01)
    assert p0 * p0 == 0
    assert g * p0 == ChowElement(PAIR, {(P0, P1): 1})
    assert degree(ChowElement(PAIR, {(P0, P1): 1})) == 1
    assert degree(ChowElement.zero(PAIR)) == 0
    assert degree(ChowElement.one(PAIR)) == 0


@pytest.mark.parametrize("d", range(-5, 11))
def test_pair_identity(d):
    D = DivisorClass.universal(PAIR, d)
    assert power_degree(D) == 2 * d - 2
    assert power_degree(D) == oracle_power(D.terms, 2, PAIR_NUMBERS)


@pytest.mark.parametrize("d,f", [(d, f) for d in range(1, 7) for f in range(1, 7)])
def test_triple_identity(d, f):
    D = DivisorClass.universal(TRIPLE, d, 0, 1) + DivisorClass.universal(TRIPLE, f, 1, 2)
    assert power_degree(D) == oracle_power(D.terms, 3, TRIPLE_NUMBERS)
    assert power_degree(D) == 6 * (d * f - 1)
    swapped = DivisorClass.universal(TRIPLE, f, 0, 1) + DivisorClass.universal(TRIPLE, d, 1, 2)
    assert power_degree(swapped) == power_degree(D)


def test_triple_example():
    D = DivisorClass.universal(TRIPLE, 2, 0, 1) + DivisorClass.universal(TRIPLE, 3, 1, 2)
    assert power_degree(D) == 30


def test_fiber_restrict():
    assert fiber_restrict(DivisorClass.universal(PAIR, 4), 0) == 4
    assert fiber_restrict(DivisorClass.of(PAIR, {P1: 1}), 1) == 0
    assert fiber_restrict(DivisorClass.of(PAIR, {G01: 1}), 1) == 1
    with pytest.raises(FMCalcError):
        fiber_restrict(DivisorClass.of(TRIPLE, {P1: 1}), 0)


def test_normal_form_examples():
    assert rewrite_normal_form([G12, P1, P2], TRIPLE) is None
    assert rewrite_normal_form([G01, G12, P1], TRIPLE) == (1, (P0, P1, P2))
    assert rewrite_normal_form([G01], PAIR) == (1, (G01,))
    assert rewrite_normal_form([G01, G12]) == (1, (T012,))


def test_tridiag_pairs_with_every_point():
    for p in (P0, P1, P2):
        e = ChowElement.generator(TRIPLE, T012) * ChowElement.generator(TRIPLE, p)
        assert degree(e) == 1


def test_three_graphs_rejected():
    with pytest.raises(UnsupportedProduct):
        rewrite_normal_form([G01, G02, G12], TRIPLE)
    a = ChowElement.generator(TRIPLE, G01) * ChowElement.generator(TRIPLE, G12)
    with pytest.raises(UnsupportedProduct):
        a * ChowElement.generator(TRIPLE, G02)


def test_beyond_dimension_is_zero():
    e = ChowElement.generator(PAIR, G01)
    assert e ** 3 == 0
    assert rewrite_normal_form([P0, P1, P2, P0], TRIPLE) is None


def _monomials(space, size):
    gens = space.generators()
    for k in range(size + 1):
        yield from combinations_with_replacement(gens, k)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_confluence_exhaustive(n):
    space = ProductSpace.of_size(n)
    count = 0
    for mono in _monomials(space, 3):
        forms = all_normal_forms(mono, space)
        assert len(forms) == 1, (mono, forms)
        (outcome,) = forms
        if outcome == REJECTED:
            with pytest.raises(UnsupportedProduct):
                rewrite_normal_form(mono, space)
        else:
            nf = rewrite_normal_form(mono, space)
            assert (nf is None and outcome[1] is None) or nf == outcome
        count += 1
    assert count > 0


tables = st.builds(
    IntersectionTable,
    st.fractions(-5, 5, max_denominator=3),
    st.fractions(-5, 5, max_denominator=3),
    st.fractions(-5, 5, max_denominator=3),
)


@settings(max_examples=25, deadline=None)
@given(tables)
def test_confluence_any_table(table):
    for mono in _monomials(TRIPLE, 3):
        assert len(all_normal_forms(mono, TRIPLE, table)) == 1


SAFE_GENS = [G01, G12, P0, P1, P2, T012]


def elements(space, gens):
    coef = st.integers(-3, 3)
    mono = st.lists(st.sampled_from(gens), min_size=0, max_size=2).map(lambda gs: tuple(sorted(gs)))
    return st.dictionaries(mono, coef, max_size=4).map(lambda t: ChowElement(space, t))


@settings(max_examples=60, deadline=None)
@given(elements(TRIPLE, SAFE_GENS), elements(TRIPLE, SAFE_GENS), elements(TRIPLE, SAFE_GENS))
def test_ring_axioms(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * ChowElement.one(TRIPLE) == a


@settings(max_examples=40, deadline=None)
@given(elements(TRIPLE, [G01, G02, P0, P1, P2]), elements(TRIPLE, [G01, G02, P0, P1, P2]))
def test_commutative_with_other_graph_pair(a, b):
    assert a * b == b * a


@settings(max_examples=40, deadline=None)
@given(elements(TRIPLE, SAFE_GENS), elements(TRIPLE, SAFE_GENS))
def test_gradedness(a, b):
    prod = a * b
    for k, part in prod.graded().items():
        expected = sum(
            (multiply(a.part(i), b.part(k - i)) for i in range(k + 1)),
            ChowElement.zero(TRIPLE),
        )
        assert part == expected
        assert k <= TRIPLE.dim


def test_exact_rationals():
    e = parse_element("1/2*G01 + 1/3*P1", PAIR)
    assert e * e == ChowElement(PAIR, {(P0, P1): Fraction(1, 3)})
    assert degree(e * e) == Fraction(1, 3)


def test_canonical_text_round_trip():
    D = DivisorClass.universal(TRIPLE, 2, 0, 1) + DivisorClass.universal(TRIPLE, 3, 1, 2)
    sq = D.element() ** 2
    assert str(sq) == "4*G01*P2 + 2*P0*P1 + 10*P1*P2 + 2*T012"
    assert parse_element(str(sq), TRIPLE) == sq
    assert str(ChowElement.zero(PAIR)) == "0"
    assert str(-ChowElement.one(PAIR) + ChowElement.generator(PAIR, P0)) == "-1 + P0"
    assert parse_divisor("G01 - 3*P1", PAIR) == DivisorClass.of(PAIR, {G01: 1, P1: -3})


def test_parse_errors():
    for bad in ["", "G10", "Q1", "G01 + ", "2*"]:
        with pytest.raises(FMCalcError):
            parse_element(bad, PAIR)
    with pytest.raises(FMCalcError):
        parse_divisor("P0*P1", PAIR)


def test_pullback():
    D = DivisorClass.universal(PAIR, 3)
    assert D.pullback(TRIPLE, (1, 2)) == DivisorClass.of(TRIPLE, {G12: 1, P2: 2})
    with pytest.raises(FMCalcError):
        D.pullback(TRIPLE, (2, 1))


def test_space_and_generator_validation():
    with pytest.raises(FMCalcError):
        ProductSpace(())
    with pytest.raises(FMCalcError):
        ProductSpace.of_size(4)
    with pytest.raises(FMCalcError):
        Graph(1, 0)
    with pytest.raises(FMCalcError):
        ChowElement.generator(PAIR, P2)
    with pytest.raises(FMCalcError):
        ChowElement.one(PAIR) * ChowElement.one(TRIPLE)
    with pytest.raises(FMCalcError):
        ChowElement.one(PAIR) * ChowElement.one(PAIR, IntersectionTable(graph_self=1))


def test_alternative_table():
    t = IntersectionTable.graph_of_multiplication(3)
    D = DivisorClass.universal(PAIR, 3)
    # (G + 2 P1)^2 = 2*2*(G.P1) = 4 * 9
    assert power_degree(D, t) == 36
    assert fiber_restrict(D, 1, t) == 9


def test_table_io(tmp_path):
    path = tmp_path / "t.json"
    path.write_text('{"graph_self": "1/2", "graph_point_second": 4}')
    t = IntersectionTable.load(path)
    assert t == IntersectionTable(1, 4, Fraction(1, 2))
    assert IntersectionTable.from_mapping(t.to_mapping()) == t
    with pytest.raises(FMCalcError):
        IntersectionTable.from_mapping({"graph_point_third": 1})


def test_non_integral_fiber_is_table_error():
    t = IntersectionTable(graph_point_first=Fraction(1, 2))
    with pytest.raises(TableError):
        fiber_restrict(DivisorClass.of(PAIR, {G01: 1}), 0, t)


def test_monomial_helper_sorts():
    assert monomial(P1, G01) == (G01, P1)
