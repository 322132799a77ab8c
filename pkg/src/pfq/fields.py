"""Exact arithmetic over the supported field towers.

A tower is one base field (the rationals, an ordered-reals model, a prime
field F_p, or a rational function field F_2(vars)) followed by an ordered stack
of complete Laurent extensions K((x1))((x2))...

Elements are reduced rational functions in every variable of the tower.  All
predicates (squareness, square classes) answer for the *complete* field, so
``1 + x`` is a square in Q((x)) even though its square root is only a power
series.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy import GF, QQ
from sympy.polys.rings import ring as _sympy_ring

from pfq.errors import (
    DivisionByZero,
    ElementSyntaxError,
    FactorizationTooLarge,
    TowerMismatch,
    ZeroElement,
)

RATIONALS = "Q"
REALS = "R"
PRIME = "Fp"
CHAR2 = "F2"

MAX_PRIME = 10_000
FACTOR_BOUND = 10**6

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@lru_cache(maxsize=None)
def _poly_ring(gens: tuple[str, ...], char: int):
    domain = QQ if char == 0 else GF(char)
    return _sympy_ring(",".join(gens), domain)[0]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


@dataclass(frozen=True)
class FieldTower:
    """A base field plus Laurent variables, innermost first.

    Use the helpers :func:`rationals`, :func:`reals`, :func:`prime_field` and
    :func:`char2_rational`, then :meth:`laurent_ext`.
    """

    base: str = RATIONALS
    p: int = 0
    base_vars: tuple[str, ...] = ()
    laurent: tuple[str, ...] = ()

    def __post_init__(self):
        if self.base not in (RATIONALS, REALS, PRIME, CHAR2):
            raise ValueError(f"unknown base field {self.base!r}")
        if self.base == PRIME:
            if self.p == 2 or not _is_prime(self.p) or self.p > MAX_PRIME:
                raise ValueError(f"PrimeField needs an odd prime <= {MAX_PRIME}, got {self.p}")
        elif self.base == CHAR2:
            if self.p != 2:
                raise ValueError("Char2Rational has p = 2")
        elif self.p != 0:
            raise ValueError(f"{self.base} has characteristic 0")
        if self.base_vars and self.base != CHAR2:
            raise ValueError("only the char-2 base carries rational variables")
        names = self.base_vars + self.laurent
        for name in names:
            if not _IDENT.match(name):
                raise ValueError(f"bad variable name {name!r}")
        if len(set(names)) != len(names):
            raise ValueError(f"variable names must be distinct: {names}")

    @property
    def char(self) -> int:
        return self.p

    @property
    def minus_one_square(self) -> bool:
        if self.base == PRIME:
            return self.p % 4 == 1
        return self.base == CHAR2

    @property
    def residue_char_2(self) -> bool:
        return self.base == CHAR2 and bool(self.laurent)

    @property
    def gens(self) -> tuple[str, ...]:
        # outermost Laurent variable first, so canonical denominators are
        # monic in that variable
        return tuple(reversed(self.laurent)) + self.base_vars

    @property
    def ring(self):
        return _poly_ring(self.gens, self.p)

    @property
    def depth(self) -> int:
        return len(self.laurent)

    def laurent_ext(self, *names: str) -> FieldTower:
        return FieldTower(self.base, self.p, self.base_vars, self.laurent + tuple(names))

    def lower(self) -> FieldTower:
        if not self.laurent:
            raise ValueError(f"{self} has no Laurent level to drop")
        return FieldTower(self.base, self.p, self.base_vars, self.laurent[:-1])

    def base_field(self) -> FieldTower:
        return FieldTower(self.base, self.p, self.base_vars, ())

    def is_below(self, other: FieldTower) -> bool:
        """True if ``other`` is this tower with further Laurent levels on top."""
        return (
            self.base == other.base
            and self.p == other.p
            and self.base_vars == other.base_vars
            and other.laurent[: len(self.laurent)] == self.laurent
        )

    def __call__(self, value) -> FieldElem:
        if isinstance(value, FieldElem):
            if value.tower == self:
                return value
            if value.tower.is_below(self):
                return self.lift(value)
            raise TowerMismatch(f"cannot coerce element of {value.tower} into {self}")
        if isinstance(value, str):
            return parse_elem(value, self)
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return FieldElem(self, self.ring(value), self.ring.one)
        if isinstance(value, Fraction):
            return FieldElem(self, self.ring(value.numerator), self.ring(value.denominator))
        raise TypeError(f"cannot make a field element from {value!r}")

    def var(self, name: str) -> FieldElem:
        if name not in self.gens:
            raise ValueError(f"{name!r} is not a variable of {self}")
        gen = self.ring.gens[self.gens.index(name)]
        return FieldElem._raw(self, gen, self.ring.one)

    @property
    def zero(self) -> FieldElem:
        return FieldElem._raw(self, self.ring.zero, self.ring.one)

    @property
    def one(self) -> FieldElem:
        return FieldElem._raw(self, self.ring.one, self.ring.one)

    def lift(self, e: FieldElem) -> FieldElem:
        """Embed an element of a lower level of this tower."""
        if not e.tower.is_below(self):
            raise TowerMismatch(f"{e.tower} is not a level of {self}")
        pad = (0,) * (len(self.laurent) - len(e.tower.laurent))
        num = self.ring.from_dict({pad + m: c for m, c in e.num.items()})
        den = self.ring.from_dict({pad + m: c for m, c in e.den.items()})
        return FieldElem._raw(self, num, den)

    def __str__(self) -> str:
        if self.base == PRIME:
            s = f"F{self.p}"
        elif self.base == CHAR2:
            s = f"F2({','.join(self.base_vars)})" if self.base_vars else "F2"
        else:
            s = self.base
        return s + "".join(f"(({v}))" for v in self.laurent)


def rationals() -> FieldTower:
    return FieldTower(RATIONALS)


def reals() -> FieldTower:
    """The ordered-reals model: rational elements, squareness decided by sign."""
    return FieldTower(REALS)


def prime_field(p: int) -> FieldTower:
    return FieldTower(PRIME, p)


def char2_rational(*names: str) -> FieldTower:
    return FieldTower(CHAR2, 2, tuple(names))


class FieldElem:
    """An element of a tower, stored as a reduced fraction num/den.

    The denominator is monic (leading coefficient 1 in the ring's lex order,
    outermost Laurent variable first), which makes (num, den) canonical.
    """

    __slots__ = ("tower", "num", "den", "_hash")

    def __init__(self, tower: FieldTower, num, den=None):
        ring = tower.ring
        if den is None:
            den = ring.one
        if not den:
            raise DivisionByZero("zero denominator")
        if not num:
            num, den = ring.zero, ring.one
        elif den.is_ground and num.is_ground:
            num, den = num.quo_ground(den.LC), ring.one
        else:
            if not den.is_ground:
                _, num, den = num.cofactors(den)
            lc = den.LC
            if lc != 1:
                num, den = num.quo_ground(lc), den.quo_ground(lc)
        self.tower = tower
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def _raw(cls, tower, num, den):
        e = object.__new__(cls)
        e.tower, e.num, e.den, e._hash = tower, num, den, None
        return e

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other) -> FieldElem:
        if isinstance(other, FieldElem):
            if other.tower != self.tower:
                raise TowerMismatch(f"{self.tower} vs {other.tower}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.tower(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return FieldElem(self.tower, self.num + o.num, self.den)
        return FieldElem(self.tower, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem._raw(self.tower, -self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den.is_ground and o.den.is_ground:
            return FieldElem._raw(self.tower, self.num * o.num, self.den)
        return FieldElem(self.tower, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> FieldElem:
        if not self.num:
            raise DivisionByZero("inverse of zero")
        return FieldElem(self.tower, self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        return FieldElem._raw(self.tower, self.num**n, self.den**n)

    # -- comparison ------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.tower(other)
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.tower == other.tower and self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.tower, frozenset(self.num.items()), frozenset(self.den.items())))
        return self._hash

    def __bool__(self):
        return bool(self.num)

    @property
    def is_zero(self) -> bool:
        return not self.num

    @property
    def is_constant(self) -> bool:
        return self.num.is_ground and self.den.is_ground

    @property
    def is_polynomial(self) -> bool:
        return self.den.is_ground

    def constant(self):
        """The value of a constant element as an int (F_p) or Fraction (Q, R)."""
        if not self.is_constant:
            raise ValueError(f"{self} is not a constant")
        c = self.num.LC if self.num else 0
        return _coeff_value(c, self.tower.p)

    def degree(self, name: str | None = None) -> int:
        """Degree of the numerator (in one variable, or total)."""
        if not self.num:
            return -1
        if name is None:
            return max(sum(m) for m in self.num.keys())
        i = self.tower.gens.index(name)
        return max(m[i] for m in self.num.keys())

    def __repr__(self):
        return f"FieldElem({str(self)!r} in {self.tower})"

    def __str__(self):
        names = self.tower.gens
        num = _poly_str(self.num, names, self.tower.p)
        if self.den == 1:
            return num
        den = _poly_str(self.den, names, self.tower.p)
        if len(self.num) > 1:
            num = f"({num})"
        if len(self.den) > 1 or "*" in den:
            den = f"({den})"
        return f"{num}/{den}"


def _coeff_value(c, p: int):
    if p == 0:
        return Fraction(int(c.numerator), int(c.denominator))
    return int(c) % p


def _monom_str(m, names) -> str:
    parts = []
    for name, e in zip(names, m):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _poly_str(poly, names, p: int) -> str:
    if not poly:
        return "0"
    out = []
    for m, c in poly.terms():
        c = _coeff_value(c, p)
        mon = _monom_str(m, names)
        if not mon:
            term = str(c)
        elif c == 1:
            term = mon
        elif c == -1:
            term = "-" + mon
        else:
            term = f"{c}*{mon}"
        if not out:
            out.append(term)
        elif term.startswith("-"):
            out.append(" - " + term[1:])
        else:
            out.append(" + " + term)
    return "".join(out)


def canon(e) -> FieldElem:
    """Canonical form of an element; idempotent (elements are always canonical)."""
    if isinstance(e, FieldElem):
        return FieldElem(e.tower, e.num, e.den)
    raise TypeError("canon expects a FieldElem; use parse_elem for text")


# -- text grammar ------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    pos, toks = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ElementSyntaxError(f"unexpected character {text[pos:pos + 1]!r} at column {pos + 1}")
        if m.group(1):
            toks.append(("int", m.group(1), m.start(1)))
        elif m.group(2):
            toks.append(("name", m.group(2), m.start(2)))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            toks.append(("op", op, m.start(3)))
        pos = m.end()
    return toks


class _ElemParser:
    def __init__(self, text, tower):
        self.toks = _tokenize(text)
        self.i = 0
        self.tower = tower
        self.text = text

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, len(self.text))

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind or "token"
            raise ElementSyntaxError(f"expected {want} at column {tok[2] + 1} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self):
        e = self.expr()
        if self.peek()[0] is not None:
            raise ElementSyntaxError(f"trailing input at column {self.peek()[2] + 1} in {self.text!r}")
        return e

    def expr(self):
        e = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            e = e + rhs if op == "+" else e - rhs
        return e

    def term(self):
        e = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            rhs = self.unary()
            e = e * rhs if op == "*" else e / rhs
        return e

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return -self.unary()
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            sign = 1
            if self.peek()[1] == "-":
                self.take()
                sign = -1
            n = int(self.take("int")[1])
            return base ** (sign * n)
        return base

    def atom(self):
        kind, val, col = self.peek()
        if kind == "int":
            self.take()
            return self.tower(int(val))
        if kind == "name":
            self.take()
            if val not in self.tower.gens:
                raise ElementSyntaxError(f"unknown variable {val!r} at column {col + 1} for {self.tower}")
            return self.tower.var(val)
        if val == "(":
            self.take()
            e = self.expr()
            self.take("op", ")")
            return e
        raise ElementSyntaxError(f"expected a number, variable or '(' at column {col + 1} in {self.text!r}")


def parse_elem(text: str, tower: FieldTower) -> FieldElem:
    """Parse ``text`` (integers, variables, + - * / ^, parentheses) in ``tower``."""
    return _ElemParser(text, tower).parse()


# -- integers ----------------------------------------------------------------


def factorize(n: int, bound: int = FACTOR_BOUND) -> dict[int, int]:
    """Trial-division factorization of |n|; raises if a cofactor is out of reach."""
    n = abs(n)
    if n == 0:
        raise ZeroElement("cannot factor 0")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        if d > bound:
            raise FactorizationTooLarge(f"cofactor {n} has no factor below {bound}")
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def squarefree_part(n: int, bound: int = FACTOR_BOUND) -> int:
    """Signed squarefree integer in the square class of the nonzero integer n."""
    s = 1
    for q, e in factorize(n, bound).items():
        if e % 2:
            s *= q
    return s if n > 0 else -s


def _as_rational(x) -> Fraction:
    if isinstance(x, FieldElem):
        if x.tower.p != 0 or x.tower.laurent:
            raise ValueError(f"{x} is not a rational number")
        return x.constant()
    return Fraction(x)


# -- valuations and square classes -------------------------------------------


def _lowest_part(poly, lower_ring):
    v = min(m[0] for m in poly.keys())
    part = lower_ring.from_dict({m[1:]: c for m, c in poly.items() if m[0] == v})
    return v, part


def valuation_split(e: FieldElem, var: str | None = None) -> tuple[int, FieldElem]:
    """Split e = var^v * u with u a unit; returns (v, u evaluated at var = 0).

    ``var`` must be the outermost Laurent variable; the residue lives one
    level down the tower.
    """
    T = e.tower
    if not T.laurent:
        raise ValueError(f"{T} has no Laurent variable")
    if var is not None and var != T.laurent[-1]:
        raise ValueError(f"valuations are taken at the outermost variable {T.laurent[-1]!r}, not {var!r}")
    if e.is_zero:
        raise ZeroElement("valuation of zero")
    low = T.lower()
    vn, n0 = _lowest_part(e.num, low.ring)
    vd, d0 = _lowest_part(e.den, low.ring)
    return vn - vd, FieldElem(low, n0, d0)


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@lru_cache(maxsize=None)
def least_nonresidue(p: int) -> int:
    return next(a for a in range(2, p) if _legendre(a, p) == -1)


def _char2_square_class(e: FieldElem) -> FieldElem:
    # F_2[vars] is free over F_2[vars^2] on the parity monomials; h^2 divides P
    # exactly when h divides every component's square root.
    T = e.tower
    ring = T.ring
    P = e.num * e.den
    comps: dict[tuple, dict] = {}
    for m, c in P.items():
        parity = tuple(k % 2 for k in m)
        comps.setdefault(parity, {})[tuple(k // 2 for k in m)] = c
    g = None
    for d in comps.values():
        poly = ring.from_dict(d)
        g = poly if g is None else g.gcd(poly)
    rep = P.exquo(g * g)
    return FieldElem(T, rep, ring.one)


def square_class_rep(e: FieldElem) -> FieldElem:
    """Canonical representative of e modulo nonzero squares of the complete tower."""
    if e.is_zero:
        raise ZeroElement("square class of zero")
    T = e.tower
    if T.laurent:
        v, res = valuation_split(e)
        rep = T.lift(square_class_rep(res))
        return rep * T.var(T.laurent[-1]) if v % 2 else rep
    if T.base == CHAR2:
        return _char2_square_class(e)
    c = e.constant()
    if T.base == PRIME:
        return T.one if _legendre(c, T.p) == 1 else T(least_nonresidue(T.p))
    if T.base == REALS:
        return T.one if c > 0 else -T.one
    return T(squarefree_part(c.numerator * c.denominator))


def is_square(e: FieldElem) -> bool:
    """Squareness in the complete tower (valuation even, residue a square)."""
    if e.is_zero:
        raise ZeroElement("is_square of zero")
    T = e.tower
    while T.laurent:
        v, e = valuation_split(e)
        if v % 2:
            return False
        T = e.tower
    return square_class_rep(e) == 1


# -- local theory over Q -------------------------------------------------------


@dataclass(frozen=True)
class Place:
    """A place of Q: ``prime=None`` is the real place."""

    prime: int | None = None

    def __post_init__(self):
        if self.prime is not None and not _is_prime(self.prime):
            raise ValueError(f"{self.prime} is not prime")

    @property
    def is_real(self) -> bool:
        return self.prime is None

    def __str__(self):
        return "inf" if self.prime is None else str(self.prime)


REAL_PLACE = Place()


def finite_place(p: int) -> Place:
    return Place(p)


def _split_p(n: int, p: int) -> tuple[int, int]:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def _square_int(x) -> int:
    q = _as_rational(x)
    if q == 0:
        raise ZeroElement("zero has no square class")
    return q.numerator * q.denominator


def hilbert_symbol(a, b, place: Place) -> int:
    """Hilbert symbol (a, b) at a place of Q, for nonzero rationals a, b."""
    a, b = _square_int(a), _square_int(b)
    if place.is_real:
        return -1 if a < 0 and b < 0 else 1
    p = place.prime
    alpha, u = _split_p(a, p)
    beta, v = _split_p(b, p)
    if p != 2:
        s = (-1) ** (alpha * beta * ((p - 1) // 2))
        if beta % 2:
            s *= _legendre(u, p)
        if alpha % 2:
            s *= _legendre(v, p)
        return s

    def eps(x):
        return ((x - 1) // 2) % 2

    def omega(x):
        return ((x * x - 1) // 8) % 2

    e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
    return -1 if e % 2 else 1


def is_local_square(a, place: Place) -> bool:
    """Whether the nonzero rational a is a square in the completion at place."""
    n = _square_int(a)
    if place.is_real:
        return n > 0
    p = place.prime
    v, u = _split_p(n, p)
    if v % 2:
        return False
    if p == 2:
        return u % 8 == 1
    return _legendre(u, p) == 1
