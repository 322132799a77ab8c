"""Hasse-Minkowski isotropy over Q for diagonal forms with integer entries."""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

from sympy.ntheory import sqrt_mod

from pfq.fields import REAL_PLACE, Place, factorize, hilbert_symbol, is_local_square, squarefree_part


def relevant_places(entries: list[int]) -> list[Place]:
    primes = {2}
    for a in entries:
        primes.update(factorize(a))
    return [REAL_PLACE] + [Place(p) for p in sorted(primes)]


def local_isotropic(entries: list[int], place: Place) -> bool:
    """Isotropy of <a1,...,an> over the completion of Q at ``place``."""
    n = len(entries)
    if n < 2:
        return False
    if place.is_real:
        return any(a > 0 for a in entries) and any(a < 0 for a in entries)
    if n >= 5:
        return True
    d = math.prod(entries)
    if n == 2:
        return is_local_square(-d, place)
    eps = 1
    for a, b in itertools.combinations(entries, 2):
        eps *= hilbert_symbol(a, b, place)
    if n == 3:
        return eps == hilbert_symbol(-1, -d, place)
    return not is_local_square(d, place) or eps == hilbert_symbol(-1, -1, place)


def hm_isotropic(entries: list[int]) -> bool:
    """Global isotropy by the local-global principle."""
    if len(entries) < 2:
        return False
    if len(entries) >= 5:
        return local_isotropic(entries, REAL_PLACE)
    return all(local_isotropic(entries, v) for v in relevant_places(entries))


def _hasse(entries: list[int], place: Place) -> int:
    eps = 1
    for a, b in itertools.combinations(entries, 2):
        eps *= hilbert_symbol(a, b, place)
    return eps


def _signed_disc(entries: list[int]) -> int:
    n = len(entries)
    return (-1) ** (n * (n - 1) // 2) * math.prod(entries)


def _locally_hyperbolic(entries: list[int], place: Place) -> bool:
    # same dimension, discriminant and Hasse invariant as m x <1, -1>
    m = len(entries) // 2
    if not is_local_square(_signed_disc(entries), place):
        return False
    return _hasse(entries, place) == hilbert_symbol(-1, -1, place) ** (m * (m - 1) // 2)


def local_witt_index(entries: list[int], place: Place) -> int:
    """Witt index of <a1,...,an> over the completion of Q at ``place``."""
    n = len(entries)
    if place.is_real:
        pos = sum(1 for a in entries if a > 0)
        return min(pos, n - pos)
    if n % 2:
        # g + <-c> has square signed discriminant when c is that of g
        c = squarefree_part(_signed_disc(entries))
        aniso = 1 if _locally_hyperbolic(entries + [-c], place) else 3
    elif _locally_hyperbolic(entries, place):
        aniso = 0
    else:
        aniso = 4 if is_local_square(_signed_disc(entries), place) else 2
    return (n - min(aniso, n)) // 2


def witt_index_q(entries: list[int]) -> int:
    """Witt index over Q as the least local Witt index.

    Hasse-Minkowski and Witt cancellation give i_W(g) >= m iff every
    completion has index >= m.  Away from 2 and the primes in the entries
    the form is unimodular: its local index is floor(n/2), less one when n
    is even and the signed discriminant is a nonsquare there, which happens
    at some such prime unless it is a rational square.
    """
    n = len(entries)
    if n < 2:
        return 0
    d = squarefree_part(_signed_disc(entries))
    generic = n // 2 - (1 if n % 2 == 0 and d != 1 else 0)
    return min([generic] + [local_witt_index(entries, v) for v in relevant_places(entries)])


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _sqfree_split(n: int) -> tuple[int, int]:
    """n = s * m^2 with s squarefree; returns (s, m)."""
    s = squarefree_part(n)
    return s, math.isqrt(n // s)


def _descent(A: int, B: int) -> tuple[int, int, int] | None:
    """Integers (x, y, z) != 0 with A x^2 + B y^2 = z^2, by Lagrange descent.

    Assumes the equation is solvable.  With t^2 = B mod A and t^2 - B = A k m^2,
    a solution of k X^2 + B Y^2 = Z^2 multiplies up through the norm of t + sqrt(B).
    """
    A, a = _sqfree_split(A)
    B, b = _sqfree_split(B)
    if abs(A) < abs(B):
        sol = _descent(B, A)
        if sol is None:
            return None
        y, x, z = sol
    elif B == 1:
        x, y, z = 0, 1, 1
    elif A == 1:
        x, y, z = 1, 0, 1
    elif A == -B:
        x, y, z = 1, 1, 0
    else:
        t = sqrt_mod(B % abs(A), abs(A))
        if t is None:
            return None
        if t > abs(A) // 2:
            t -= abs(A)
        k, m = _sqfree_split((t * t - B) // A)
        sol = _descent(k, B)
        if sol is None:
            return None
        X, Y, Z = sol
        x, y, z = k * m * X, t * Y + Z, t * Z + B * Y
    # undo the square factors pulled out of A and B
    x, y = x * b, y * a
    z *= a * b
    g = math.gcd(math.gcd(x, y), z)
    return x // g, y // g, z // g


def _ternary(entries: list[int]) -> list[Fraction] | None:
    a, b, c = entries
    sol = _descent(-a * c, -b * c)
    if sol is None:
        return None
    x, y, z = sol
    return [Fraction(x), Fraction(y), Fraction(z, c)]


def _binary(entries: list[int]) -> list[Fraction] | None:
    a, b = entries
    r = _rational_sqrt(Fraction(-b, a))
    return None if r is None else [r, Fraction(1)]


def _auxiliary_values():
    t = 1
    while True:
        yield t
        yield -t
        t += 1


def _split_solve(entries: list[int]) -> list[Fraction]:
    """Dimension 4 or 5: find t with <a1,a2,-t> and <rest, t> both isotropic, glue."""
    head, tail = entries[:2], entries[2:]
    for t in _auxiliary_values():
        if not (hm_isotropic(head + [-t]) and hm_isotropic(tail + [t])):
            continue
        u = _solve(head + [-t])
        w = _solve(tail + [t])
        # u: a1 u1^2 + a2 u2^2 = t u3^2, w: sum + t w_last^2 = 0
        if u[2] == 0:
            return u[:2] + [Fraction(0)] * len(tail)
        if w[-1] == 0:
            return [Fraction(0)] * 2 + w[:-1]
        lam = w[-1] / u[2]
        return [lam * u[0], lam * u[1]] + w[:-1]
    raise AssertionError("unreachable")


def _solve(entries: list[int]) -> list[Fraction]:
    n = len(entries)
    for i, j in itertools.combinations(range(n), 2):
        if entries[i] == -entries[j]:
            v = [Fraction(0)] * n
            v[i] = v[j] = Fraction(1)
            return v
    if n == 2:
        v = _binary(entries)
    elif n == 3:
        v = _ternary(entries)
    else:
        v = _split_solve(entries)
    assert v is not None and any(v)
    return v


def find_isotropic_vector(entries: list[int]) -> list[Fraction] | None:
    """An isotropic vector of <entries>, or None when the form is anisotropic."""
    n = len(entries)
    for i, j in itertools.combinations(range(n), 2):
        if entries[i] == -entries[j]:
            v = [Fraction(0)] * n
            v[i] = v[j] = Fraction(1)
            return v
    if not hm_isotropic(entries):
        return None
    for size in (2, 3, 4, 5):
        for idx in itertools.combinations(range(n), size):
            sub = [entries[i] for i in idx]
            if size == 5 and not local_isotropic(sub, REAL_PLACE):
                continue
            if size < 5 and not hm_isotropic(sub):
                continue
            w = _solve(sub)
            v = [Fraction(0)] * n
            for i, x in zip(idx, w):
                v[i] = x
            return v
    raise AssertionError("an isotropic form has an isotropic subform of dimension <= 5")
