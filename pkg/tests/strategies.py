"""Hypothesis strategies and small brute-force oracles shared by the tests."""
import itertools
from fractions import Fraction
from math import gcd

from hypothesis import strategies as st

from pfq.fields import char2_rational, prime_field, rationals, reals

Q = rationals()
R = reals()
F5 = prime_field(5)
QL = Q.laurent_ext("x", "y")
F5L = F5.laurent_ext("x", "y")
F2 = char2_rational("x", "y")

nonzero_ints = st.integers(-12, 12).filter(bool)


@st.composite
def polys(draw, tower, max_terms=3, max_exp=2):
    """Small polynomials in the tower's variables (possibly zero)."""
    names = tower.gens
    e = tower.zero
    for _ in range(draw(st.integers(0, max_terms))):
        c = draw(st.integers(-4, 4))
        term = tower(c)
        for name in names:
            term = term * tower.var(name) ** draw(st.integers(0, max_exp))
        e = e + term
    return e


@st.composite
def nonzero_elems(draw, tower):
    num = draw(polys(tower).filter(lambda e: not e.is_zero))
    den = draw(polys(tower).filter(lambda e: not e.is_zero))
    return num / den


@st.composite
def laurent_units(draw, tower):
    """Nonzero elements with an explicit monomial factor, so valuations vary."""
    e = draw(nonzero_elems(tower))
    for name in tower.laurent:
        e = e * tower.var(name) ** draw(st.integers(-3, 3))
    return e


def f5_isotropic_bruteforce(entries: list[int]) -> bool:
    """Exhaustive zero search over (F_5)^n."""
    n = len(entries)
    for v in itertools.product(range(5), repeat=n):
        if any(v) and sum(a * x * x for a, x in zip(entries, v)) % 5 == 0:
            return True
    return False


def _squarefree(n: int) -> int:
    sign, n = (-1 if n < 0 else 1), abs(n)
    out, p = 1, 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
        if n % p == 0:
            out *= p
            n //= p
        p += 1
    return sign * out * n


def _is_qr(a: int, m: int) -> bool:
    m = abs(m)
    if m == 1:
        return True
    return any((x * x - a) % m == 0 for x in range(m))


def legendre_isotropic(a: int, b: int, c: int) -> bool:
    """Legendre's criterion for ax^2 + by^2 + cz^2 = 0 over Q."""
    a, b, c = _squarefree(a), _squarefree(b), _squarefree(c)
    # make the coefficients pairwise coprime: p | a, b  =>  (a/p, b/p, c p)
    changed = True
    while changed:
        changed = False
        for _ in range(3):
            g = gcd(a, b)
            if abs(g) > 1:
                a, b, c = a // g, b // g, _squarefree(c * g)
                changed = True
            a, b, c = b, c, a
    if (a > 0) == (b > 0) == (c > 0):
        return False
    return _is_qr(-b * c, a) and _is_qr(-c * a, b) and _is_qr(-a * b, c)


def hilbert_bruteforce(a: int, b: int, p: int | None) -> int:
    """Hilbert symbol from solubility of z^2 = a x^2 + b y^2 by exhaustion.

    Over R this is a sign test.  At a prime, a primitive solution modulo
    p^2 (2^5 at p = 2) decides the local question for coefficients of
    valuation at most one.
    """
    if p is None:
        return -1 if a < 0 and b < 0 else 1
    m = 32 if p == 2 else p**2
    for x, y, z in itertools.product(range(m), repeat=3):
        if x % p == y % p == z % p == 0:
            continue
        if (a * x * x + b * y * y - z * z) % m == 0:
            return 1
    return -1


def rational_value(entries, vec) -> Fraction:
    return sum(Fraction(a) * Fraction(v) ** 2 for a, v in zip(entries, vec))


SLOTS = {
    "Q": [-7, -6, -5, -3, -2, -1, 2, 3, 5, 6, 7, 10],
    "R": [-1, 1, 2, -3],
    "F5": [1, 2, 3, 4],
}


def slot_pool(tower) -> list:
    """Nonzero slot candidates, as field elements."""
    base = {"Q": SLOTS["Q"], "R": SLOTS["R"], "Fp": SLOTS["F5"]}.get(tower.base)
    if tower.char == 2:
        x, y = (tower.var(v) for v in tower.gens[:2])
        return [x, y, x + 1, y + 1, x * y, x * y + 1, x + y, x * y + x]
    out = [tower(c) for c in base]
    for name in tower.laurent:
        v = tower.var(name)
        out += [c * v for c in out[:4]]
    return out


@st.composite
def pfister(draw, tower, min_fold=1, max_fold=3, k=0):
    from pfq.forms import PfisterPres

    pool = slot_pool(tower)
    n = draw(st.integers(max(min_fold, k, 1), max_fold))
    if tower.char == 2:
        slots = tuple(draw(st.sampled_from(pool)) for _ in range(n - 1))
        return PfisterPres(tower, slots, draw(st.sampled_from(pool)), k)
    return PfisterPres(tower, tuple(draw(st.sampled_from(pool)) for _ in range(n)), None, k)
