import pytest
from hypothesis import given
from hypothesis import strategies as st

from pfq.errors import InvalidSlot, NoSharedFactor, TowerMismatch, ZeroElement
from pfq.forms import (
    PfisterPres,
    diag,
    empty_form,
    evaluate,
    expand,
    gram,
    negate,
    orth_sum,
    pairs_form,
    pure_part,
    scale,
    tensor_bilinear,
    theta_complement,
)
from pfq.oracles import isometric
from strategies import F2, F5, F5L, Q, QL, R, pfister

CHAR0_TOWERS = [Q, R, F5, QL, F5L]


def test_expand_char_not_2():
    assert expand(PfisterPres(Q, (2, 3))) == diag(Q, [1, -2, -3, 6])
    assert expand(PfisterPres(Q, (1,))) == diag(Q, [1, -1])


def test_expand_char_2():
    b, a = F2("x"), F2("y")
    assert expand(PfisterPres(F2, (b,), a)) == pairs_form(F2, [(1, a), (b, a)])
    assert expand(PfisterPres(F2, (), a)).dim == 2


def test_invalid_presentations():
    with pytest.raises(InvalidSlot):
        PfisterPres(Q, (2, 0))
    with pytest.raises(InvalidSlot):
        PfisterPres(F2, (F2("x"),))
    with pytest.raises(InvalidSlot):
        PfisterPres(Q, (2,), Q(3))
    with pytest.raises(InvalidSlot):
        PfisterPres(Q, (2,), None, 2)


def test_slot_layout():
    p = PfisterPres(Q, (2, 3, 5), None, 2)
    assert p.free_slots() == (Q(2),)
    assert p.shared_slots() == (Q(3), Q(5))
    # in characteristic 2 the Artin-Schreier slot is the innermost shared slot
    c = PfisterPres(F2, (F2("x"), F2("y")), F2("x*y"), 2)
    assert c.free_slots() == (F2("x"),)
    assert c.shared_slots() == (F2("y"),)
    assert c.shared_factor() == PfisterPres(F2, (F2("y"),), F2("x*y"), 2)


def test_orth_sum():
    assert orth_sum(diag(Q, [1]), diag(Q, [-1])) == diag(Q, [1, -1])
    a, x = F2("y"), F2("x")
    one = pairs_form(F2, [(1, a)])
    assert orth_sum(one, pairs_form(F2, [(x, a)])).pairs == ((F2(1), a), (x, a))
    f = diag(QL, ["x", "y"])
    assert orth_sum(f, empty_form(QL)) == f
    with pytest.raises(TowerMismatch):
        orth_sum(diag(Q, [1]), diag(F5, [1]))


def test_tensor_bilinear():
    t = tensor_bilinear([Q(1), Q(-2)], diag(Q, [1, -3]))
    assert sorted(map(str, t.diagonal)) == sorted(map(str, expand(PfisterPres(Q, (2, 3))).diagonal))
    a, b = F2("y"), F2("x")
    assert tensor_bilinear([F2(1), b], pairs_form(F2, [(1, a)])) == expand(PfisterPres(F2, (b,), a))
    assert tensor_bilinear([Q(5)], diag(Q, [1])) == diag(Q, [5])
    with pytest.raises(InvalidSlot):
        tensor_bilinear([Q(0)], diag(Q, [1]))


def test_theta_complement_examples():
    b1, a = F2("x"), F2("y")
    th = theta_complement(PfisterPres(F2, (b1,), a, 1))
    assert th == pairs_form(F2, [(b1, a)]) and th.dim == 2
    assert theta_complement(PfisterPres(Q, (2, 3), None, 1)) == diag(Q, [-2, 6])
    assert theta_complement(PfisterPres(Q, (3,), None, 1)).dim == 0
    with pytest.raises(NoSharedFactor):
        theta_complement(PfisterPres(Q, (2, 3)))


def test_scale_and_negate():
    assert negate(diag(Q, [1, -2])) == diag(Q, [-1, 2])
    f = pairs_form(F2, [(1, "y"), ("x", "y")])
    assert negate(f) == f
    assert scale(F2("x"), pairs_form(F2, [(1, "y")])) == pairs_form(F2, [("x", "y")])
    with pytest.raises(ZeroElement):
        scale(Q(0), diag(Q, [1]))


def test_gram_examples():
    g = gram(diag(QL, [1, "-x"]))
    assert g.polar == ((QL(2), QL(0)), (QL(0), QL("-2*x")))
    assert gram(pairs_form(F2, [(1, "y")])).polar == ((F2(0), F2(1)), (F2(1), F2(0)))
    q = gram(diag(F2, [1]))
    assert q.polar == ((F2(0),),) and q.degenerate
    assert not g.degenerate


@pytest.mark.parametrize("T", CHAR0_TOWERS + [F2], ids=str)
@given(data=st.data())
def test_polar_form_identity(T, data):
    p = data.draw(pfister(T, max_fold=2))
    f = expand(p)
    g = gram(f)
    n = f.dim
    ints = st.lists(st.integers(-3, 3), min_size=n, max_size=n)
    v = [T(c) for c in data.draw(ints)]
    w = [T(c) for c in data.draw(ints)]
    s = [a + b for a, b in zip(v, w)]
    assert g.bilinear(v, w) == evaluate(f, s) - evaluate(f, v) - evaluate(f, w)


@pytest.mark.parametrize("T", CHAR0_TOWERS + [F2], ids=str)
@given(data=st.data())
def test_dimension_is_power_of_two(T, data):
    p = data.draw(pfister(T, max_fold=4))
    assert expand(p).dim == 2**p.fold == p.dim


@pytest.mark.parametrize("T", CHAR0_TOWERS, ids=str)
@given(data=st.data())
def test_pure_part_completes_to_expand(T, data):
    p = data.draw(pfister(T))
    pure = tensor_bilinear(pure_part(p.slots, T.p), diag(T, [1]))
    full = orth_sum(diag(T, [1]), pure)
    assert sorted(map(str, full.diagonal)) == sorted(map(str, expand(p).diagonal))


@pytest.mark.parametrize("T", CHAR0_TOWERS + [F2], ids=str)
@given(data=st.data())
def test_theta_complement_splits_off_pi(T, data):
    k = data.draw(st.integers(1, 2))
    p = data.draw(pfister(T, min_fold=k, max_fold=3, k=k))
    th = theta_complement(p)
    assert th.dim == 2**p.fold - 2**k
    d = isometric(expand(p), orth_sum(expand(p.shared_factor()), th))
    assert not d.no
    if T.char != 2:
        assert d.yes


@given(data=st.data())
def test_char2_double_is_hyperbolic(data):
    from pfq.oracles import is_hyperbolic

    f = expand(data.draw(pfister(F2, max_fold=2)))
    assert is_hyperbolic(orth_sum(f, f)).yes
