"""Isotropy certificates in characteristic 2.

Polynomials over F_2 are packed into Python ints: the monomial with exponent
vector e sits at bit sum(e_i * stride**i), so addition is XOR and
multiplication is carry-less multiplication.  For a fixed choice of the
y-coordinates the form

    sum a_i X_i^2 + b_i X_i Y_i + d_i Y_i^2 + sum e_j Z_j^2

is F_2-linear in the remaining coordinates (squaring is additive), so each
y-choice is settled by one Gaussian elimination instead of an enumeration.
"""
from __future__ import annotations

import itertools

from pfq.fields import FieldElem, FieldTower
from pfq.forms import QForm
from pfq.oracles.decision import Decision, SearchBudget


def clmul(a: int, b: int) -> int:
    if a.bit_count() > b.bit_count():
        a, b = b, a
    r = 0
    while a:
        low = a & -a
        r ^= b << (low.bit_length() - 1)
        a ^= low
    return r


def square(a: int) -> int:
    r = 0
    while a:
        low = a & -a
        r |= 1 << (2 * (low.bit_length() - 1))
        a ^= low
    return r


class Packer:
    def __init__(self, nvars: int, stride: int):
        self.nvars = nvars
        self.stride = stride

    def offset(self, monom) -> int:
        off, w = 0, 1
        for e in monom:
            off += e * w
            w *= self.stride
        return off

    def pack(self, poly) -> int:
        r = 0
        for m in poly.keys():
            r ^= 1 << self.offset(m)
        return r

    def unpack(self, n: int) -> list[tuple]:
        out = []
        while n:
            low = n & -n
            b = low.bit_length() - 1
            m = []
            for _ in range(self.nvars):
                b, e = divmod(b, self.stride)
                m.append(e)
            out.append(tuple(m))
            n ^= low
        return out


def monomials(nvars: int, degree: int) -> list[tuple]:
    """Exponent vectors of total degree <= degree, by degree then lex."""
    out = []
    for d in range(degree + 1):
        out.extend(sorted((m for m in itertools.product(range(d + 1), repeat=nvars) if sum(m) == d), reverse=True))
    return out


def _max_exp(polys) -> int:
    return max((max(m, default=0) for p in polys for m in p.keys()), default=0)


def _total_deg(poly) -> int:
    return max((sum(m) for m in poly.keys()), default=0)


def _eliminate(columns: list[int], target: int | None):
    """Return (solution combo for target or None, first kernel combo or None)."""
    basis: dict[int, tuple[int, int]] = {}
    kernel = None
    for k, col in enumerate(columns):
        v, c = col, 1 << k
        while v:
            h = v.bit_length() - 1
            hit = basis.get(h)
            if hit is None:
                basis[h] = (v, c)
                break
            v ^= hit[0]
            c ^= hit[1]
        if not v and kernel is None:
            kernel = c
    if target is None:
        return None, kernel
    v, c = target, 0
    while v:
        h = v.bit_length() - 1
        hit = basis.get(h)
        if hit is None:
            return None, kernel
        v ^= hit[0]
        c ^= hit[1]
    return c, kernel


def artin_schreier_root(alpha: FieldElem) -> FieldElem | None:
    """A rational f with f^2 + f = alpha, or None if there is none in F_2(vars).

    If f = g/h in lowest terms then alpha has denominator h^2 and
    g^2 + g*h = numerator; g has total degree <= max(deg h, deg num / 2), and
    the map g -> g^2 + g*h is F_2-linear, so this is one linear solve.
    """
    T = alpha.tower
    ring = T.ring
    if not alpha:
        return T.zero
    den = alpha.den
    if any(e % 2 for m in den.keys() for e in m):
        return None
    h = ring.from_dict({tuple(e // 2 for e in m): c for m, c in den.items()})
    num = alpha.num
    bound = max(_total_deg(h), _total_deg(num) // 2)
    nvars = len(T.gens)
    stride = max(2 * bound + _max_exp([h]) + 1, _max_exp([num]) + 1)
    pk = Packer(nvars, stride)
    ph = pk.pack(h)
    mons = monomials(nvars, bound)
    cols = []
    for m in mons:
        off = pk.offset(m)
        cols.append((1 << (2 * off)) ^ (ph << off))
    combo, _ = _eliminate(cols, pk.pack(num))
    if combo is None:
        return None
    g = ring.from_dict({m: 1 for k, m in enumerate(mons) if combo >> k & 1})
    return FieldElem(T, g, h)


class _Prepared:
    """The form multiplied by a common denominator, with y_i rescaled by den(alpha_i)."""

    def __init__(self, f: QForm):
        T = f.tower
        ring = T.ring
        dens = [c.den for c, _ in f.pairs] + [d.den for d in f.quasilinear]
        L = ring.one
        for d in dens:
            L = L.lcm(d)
        self.a, self.b, self.d, self.yscale = [], [], [], []
        for c, alpha in f.pairs:
            a = L.exquo(c.den) * c.num
            self.a.append(a)
            self.b.append(a * alpha.den)
            self.d.append(a * alpha.num * alpha.den)
            self.yscale.append(FieldElem(T, alpha.den, ring.one))
        self.e = [L.exquo(q.den) * q.num for q in f.quasilinear]
        self.maxexp = _max_exp(self.a + self.b + self.d + self.e)


def _structural(f: QForm) -> Decision | None:
    """Certificates visible from the shape: repeated scales, split pieces."""
    T = f.tower
    n = f.dim
    slots = [("p", i, c) for i, (c, _) in enumerate(f.pairs)]
    off = 2 * len(f.pairs)
    slots += [("q", j, d) for j, d in enumerate(f.quasilinear)]
    seen: dict = {}
    for kind, i, c in slots:
        prev = seen.get(c)
        if prev is not None:
            v = [T.zero] * n
            for kk, ii in (prev, (kind, i)):
                v[2 * ii if kk == "p" else off + ii] = T.one
            return Decision.isotropic(f, v, "two summands with the same scale cancel")
        seen[c] = (kind, i)
    for i, (_, alpha) in enumerate(f.pairs):
        root = artin_schreier_root(alpha)
        if root is not None:
            v = [T.zero] * n
            v[2 * i], v[2 * i + 1] = root, T.one
            return Decision.isotropic(f, v, "a piece c*[1,a] with a = r^2 + r")
    return None


def is_isotropic_char2(f: QForm, budget: SearchBudget) -> Decision:
    T: FieldTower = f.tower
    found = _structural(f)
    if found is not None:
        return found
    exact = not T.laurent
    if exact and f.dim <= 2:
        if len(f.pairs) == 1:
            return Decision.no_("[1,a] is anisotropic: a is not of the form r^2 + r")
        return Decision.no_("distinct square classes")
    return _search(f, budget)


def _search(f: QForm, budget: SearchBudget) -> Decision:
    T = f.tower
    ring = T.ring
    prep = _Prepared(f)
    nvars = len(T.gens)
    r, s = len(f.pairs), len(f.quasilinear)
    count = 0
    for deg in range(budget.max_total_degree + 1):
        mons = monomials(nvars, deg)
        nm = len(mons)
        pk = Packer(nvars, prep.maxexp + 2 * deg + 1)
        offs = [pk.offset(m) for m in mons]
        pa = [pk.pack(p) for p in prep.a]
        pb = [pk.pack(p) for p in prep.b]
        pd = [pk.pack(p) for p in prep.d]
        pe = [pk.pack(p) for p in prep.e]
        a_cols = [[x << (2 * o) for o in offs] for x in pa]
        e_cols = [x << (2 * o) for x in pe for o in offs]
        ypoly = [0] * (1 << nm)
        for chunk in range(1, 1 << nm):
            low = chunk & -chunk
            ypoly[chunk] = ypoly[chunk ^ low] ^ (1 << offs[low.bit_length() - 1])
        by_cache = [dict() for _ in range(r)]
        t_cache = [dict() for _ in range(r)]
        mask = (1 << nm) - 1
        for yidx in range(1 << (r * nm)):
            count += 1
            if count > budget.max_candidates:
                return Decision.unknown_(
                    {"degree": deg, "candidates": budget.max_candidates},
                    "candidate budget exhausted",
                )
            cols = []
            target = 0
            for i in range(r):
                chunk = (yidx >> (i * nm)) & mask
                if chunk:
                    by = by_cache[i].get(chunk)
                    if by is None:
                        yp = ypoly[chunk]
                        by = by_cache[i][chunk] = clmul(pb[i], yp)
                        t_cache[i][chunk] = clmul(pd[i], square(yp))
                    target ^= t_cache[i][chunk]
                    cols.extend(ac ^ (by << o) for ac, o in zip(a_cols[i], offs))
                else:
                    cols.extend(a_cols[i])
            cols.extend(e_cols)
            if yidx == 0:
                _, combo = _eliminate(cols, None)
            else:
                combo, _ = _eliminate(cols, target)
            if combo is None:
                continue
            v = _certificate(T, ring, prep, mons, r, s, yidx, combo)
            return Decision.isotropic(f, v, f"bounded search, degree {deg}")
    return Decision.unknown_(
        {"degree": budget.max_total_degree, "candidates": count},
        "no isotropic vector within the degree bound",
    )


def _certificate(T, ring, prep, mons, r, s, yidx, combo):
    nm = len(mons)

    def poly(bits):
        return FieldElem(T, ring.from_dict({m: 1 for k, m in enumerate(mons) if bits >> k & 1}), ring.one)

    mask = (1 << nm) - 1
    v = []
    for i in range(r):
        x = poly((combo >> (i * nm)) & mask)
        y = poly((yidx >> (i * nm)) & mask) * prep.yscale[i]
        v += [x, y]
    for j in range(s):
        v.append(poly((combo >> ((r + j) * nm)) & mask))
    return v
