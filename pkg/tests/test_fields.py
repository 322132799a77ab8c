import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import primefactors

from pfq.errors import DivisionByZero, ElementSyntaxError, FactorizationTooLarge, ZeroElement
from pfq.fields import (
    REAL_PLACE,
    FieldTower,
    char2_rational,
    finite_place,
    hilbert_symbol,
    is_square,
    least_nonresidue,
    parse_elem,
    prime_field,
    rationals,
    square_class_rep,
    squarefree_part,
    valuation_split,
)
from strategies import F2, F5, F5L, Q, QL, R, hilbert_bruteforce, laurent_units, nonzero_elems

TOWERS = [Q, F5, QL, F5L, F2]
QX = Q.laurent_ext("x")


def test_canonical_reduction():
    assert str(Q("6/4")) == "3/2"
    assert F2("(x^2 + x)/x") == F2("x + 1")
    assert QX("(x^2 - x)/x") == QX("x - 1")


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        Q(1) / Q(0)
    with pytest.raises(DivisionByZero):
        F2("x/(x + x)")


def test_printing_round_trips_through_parser():
    for T, text in [(QL, "(3*x^2 - y)/(x + 1)"), (F2, "x*y + x + 1"), (F5L, "-1/(2*y)")]:
        e = T(text)
        assert parse_elem(str(e), T) == e


def test_parse_errors():
    with pytest.raises(ElementSyntaxError):
        parse_elem("x +", QL)
    with pytest.raises(ElementSyntaxError):
        parse_elem("z", QL)


def test_tower_flags():
    assert not Q.minus_one_square and not R.minus_one_square
    assert F5.minus_one_square and F5L.minus_one_square
    assert not prime_field(7).minus_one_square
    assert F2.minus_one_square and F2.char == 2
    assert char2_rational("x").laurent_ext("t").residue_char_2
    with pytest.raises(ValueError):
        prime_field(4)
    with pytest.raises(ValueError):
        QL.laurent_ext("x")
    with pytest.raises(ValueError):
        FieldTower("PrimeField", 10007)


@pytest.mark.parametrize("T", TOWERS, ids=str)
@given(data=st.data())
def test_field_axioms(T, data):
    a, b, c = (data.draw(nonzero_elems(T)) for _ in range(3))
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * a.inverse() == T.one
    assert a - a == T.zero
    assert (a / b) * b == a


def test_is_square_examples():
    assert is_square(Q("9/4"))
    assert not is_square(F5(2))
    # the square root is a power series in x, not a rational function
    assert is_square(QX("x^2*(1 + x)"))
    assert not is_square(QX("x*(1 + x)"))
    assert is_square(F2("x^2*y^4 + x^4"))
    assert not is_square(F2("x*y^2"))
    with pytest.raises(ZeroElement):
        is_square(Q(0))


def test_is_square_f5_matches_table():
    squares = {x * x % 5 for x in range(1, 5)}
    for a in range(1, 5):
        assert is_square(F5(a)) == (a in squares)


@pytest.mark.parametrize("T", [Q, F5, QL, F5L, F2], ids=str)
@given(data=st.data())
def test_squares_and_nonsquares(T, data):
    e = data.draw(laurent_units(T) if T.laurent else nonzero_elems(T))
    assert is_square(e * e)
    nonsq = {Q: Q(2), F5: F5(least_nonresidue(5)), QL: QL("x"), F5L: F5L("y"), F2: F2("x")}[T]
    assert not is_square(e * e * nonsq)


@pytest.mark.parametrize("T", [Q, F5, QL, F5L, F2], ids=str)
@given(data=st.data())
def test_square_class_rep_is_class_invariant(T, data):
    draw = laurent_units if T.laurent else nonzero_elems
    e, f = data.draw(draw(T)), data.draw(draw(T))
    r = square_class_rep(e)
    assert square_class_rep(e * f * f) == r
    assert is_square(e / r)


def test_square_class_rep_examples():
    assert square_class_rep(Q(18)) == Q(2)
    assert square_class_rep(QX("x^3*(1 + x)^2")) == QX("x")
    assert square_class_rep(F5(-1)) == F5(1)
    assert square_class_rep(Q("-50/3")) == Q(-6)


def test_valuation_split_examples():
    assert valuation_split(QX("5*x"), "x") == (1, Q(5))
    assert valuation_split(QX("x^2 + x^3")) == (2, Q(1))
    assert valuation_split(QX(7)) == (0, Q(7))
    assert valuation_split(QL("y^-3*(x + y)")) == (-3, QX("x"))
    with pytest.raises(ZeroElement):
        valuation_split(QX(0))


@pytest.mark.parametrize("T", [QL, F5L], ids=str)
@given(data=st.data())
def test_valuation_split_round_trip(T, data):
    e = data.draw(laurent_units(T))
    v, r = valuation_split(e)
    y = T.var(T.laurent[-1])
    u = e / (y**v * T.lift(r))
    # u is a unit with residue 1
    assert valuation_split(u) == (0, T.lower().one)


def test_hilbert_symbol_examples():
    assert hilbert_symbol(-1, -1, REAL_PLACE) == -1
    assert hilbert_symbol(-1, -1, finite_place(2)) == -1
    for p in (REAL_PLACE, finite_place(2), finite_place(3), finite_place(7)):
        assert hilbert_symbol(1, 5, p) == 1
    with pytest.raises(ZeroElement):
        hilbert_symbol(0, 3, REAL_PLACE)


GRID = [1, -1, 2, -2, 5, -5, 7, -7, 10, -10]


def _places(a, b):
    return [None] + primefactors(2 * a * b)


def test_hilbert_symbol_matches_bruteforce():
    for a, b in itertools.product(GRID, repeat=2):
        for p in _places(a, b):
            place = REAL_PLACE if p is None else finite_place(p)
            assert hilbert_symbol(a, b, place) == hilbert_bruteforce(a, b, p), (a, b, p)


def test_hilbert_product_formula():
    for a, b in itertools.product(GRID, repeat=2):
        prod = 1
        for p in _places(a, b):
            prod *= hilbert_symbol(a, b, REAL_PLACE if p is None else finite_place(p))
        assert prod == 1, (a, b)


@given(a=st.sampled_from(GRID), b=st.sampled_from(GRID), c=st.sampled_from(GRID), p=st.sampled_from([2, 3, 5, 7]))
def test_hilbert_symbol_bimultiplicative_and_symmetric(a, b, c, p):
    P = finite_place(p)
    assert hilbert_symbol(a, b, P) == hilbert_symbol(b, a, P)
    assert hilbert_symbol(a, b * c, P) == hilbert_symbol(a, b, P) * hilbert_symbol(a, c, P)


def test_factorization_bound():
    assert squarefree_part(-72) == -2
    with pytest.raises(FactorizationTooLarge):
        squarefree_part(1000003 * 1000033, bound=10**3)
