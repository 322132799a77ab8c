"""Quadratic forms and Pfister presentations in both characteristic regimes.

Outside characteristic 2 a form is a diagonal list of coefficients.  In
characteristic 2 it is a list of scaled binary pieces c*[1, a], where
[1, a] = x^2 + xy + a*y^2, plus an optional quasilinear tail d*z^2.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from pfq.errors import InvalidSlot, NoSharedFactor, TowerMismatch, ZeroElement
from pfq.fields import FieldElem, FieldTower, square_class_rep


def _elem(tower: FieldTower, x) -> FieldElem:
    return tower(x)


def _normalized(e: FieldElem) -> FieldElem:
    return square_class_rep(e) if e else e


@dataclass(frozen=True)
class QForm:
    tower: FieldTower
    diagonal: tuple = ()
    pairs: tuple = ()
    quasilinear: tuple = ()

    @property
    def char2(self) -> bool:
        return self.tower.p == 2

    @property
    def dim(self) -> int:
        return len(self.diagonal) + 2 * len(self.pairs) + len(self.quasilinear)

    @property
    def nonsingular(self) -> bool:
        return not self.char2 or not self.quasilinear

    def __len__(self):
        return self.dim

    def __str__(self):
        if not self.char2:
            return "diag(" + ", ".join(map(str, self.diagonal)) + ")"
        body = ", ".join(f"({c}, {a})" for c, a in self.pairs)
        if self.quasilinear:
            body += "; " + ", ".join(map(str, self.quasilinear))
        return f"pairs({body})"


def diag(tower: FieldTower, entries: Sequence, normalize: bool = True) -> QForm:
    """Diagonal form; in characteristic 2 the entries form a quasilinear form."""
    es = [_elem(tower, x) for x in entries]
    if normalize:
        es = [_normalized(e) for e in es]
    if tower.p == 2:
        return QForm(tower, quasilinear=tuple(es))
    return QForm(tower, diagonal=tuple(es))


def pairs_form(tower: FieldTower, pairs: Sequence, quasilinear: Sequence = (), normalize: bool = True) -> QForm:
    """Characteristic-2 form  c1*[1,a1] + ... + d1*z1^2 + ...  ."""
    if tower.p != 2:
        raise TowerMismatch(f"binary [1,a] pieces need characteristic 2, not {tower}")
    ps = []
    for c, a in pairs:
        c, a = _elem(tower, c), _elem(tower, a)
        if not c:
            raise InvalidSlot("zero scale in c*[1,a]")
        ps.append((_normalized(c) if normalize else c, a))
    qs = [_elem(tower, d) for d in quasilinear]
    if normalize:
        qs = [_normalized(d) for d in qs]
    return QForm(tower, pairs=tuple(ps), quasilinear=tuple(qs))


def empty_form(tower: FieldTower) -> QForm:
    return QForm(tower)


def evaluate(f: QForm, v: Sequence[FieldElem]) -> FieldElem:
    """The value f(v); coordinates are (x1, y1, x2, y2, ..., z1, ...) in char 2."""
    if len(v) != f.dim:
        raise ValueError(f"vector of length {len(v)} for a form of dimension {f.dim}")
    T = f.tower
    v = [T(x) for x in v]
    total = T.zero
    if not f.char2:
        for d, x in zip(f.diagonal, v):
            if x:
                total = total + d * x * x
        return total
    for i, (c, a) in enumerate(f.pairs):
        x, y = v[2 * i], v[2 * i + 1]
        if x or y:
            total = total + c * (x * x + x * y + a * y * y)
    off = 2 * len(f.pairs)
    for d, z in zip(f.quasilinear, v[off:]):
        if z:
            total = total + d * z * z
    return total


def orth_sum(f: QForm, g: QForm) -> QForm:
    if f.tower != g.tower:
        raise TowerMismatch(f"{f.tower} vs {g.tower}")
    return QForm(f.tower, f.diagonal + g.diagonal, f.pairs + g.pairs, f.quasilinear + g.quasilinear)


def orth_sum_all(forms: Sequence[QForm], tower: FieldTower | None = None) -> QForm:
    out = empty_form(tower if tower is not None else forms[0].tower)
    for f in forms:
        out = orth_sum(out, f)
    return out


def scale(c, f: QForm) -> QForm:
    c = f.tower(c)
    if not c:
        raise ZeroElement("scaling a form by zero")
    if f.char2:
        return QForm(
            f.tower,
            pairs=tuple((_normalized(c * s), a) for s, a in f.pairs),
            quasilinear=tuple(_normalized(c * d) for d in f.quasilinear),
        )
    return QForm(f.tower, diagonal=tuple(_normalized(c * d) for d in f.diagonal))


def negate(f: QForm) -> QForm:
    if f.char2:
        return f
    return scale(-1, f)


def tensor_bilinear(coeffs: Sequence, q: QForm) -> QForm:
    """<c1,...,cm> (x) q, as a bilinear diagonal form times a quadratic form."""
    cs = [q.tower(c) for c in coeffs]
    if any(not c for c in cs):
        raise InvalidSlot("zero coefficient in a bilinear tensor factor")
    if q.char2:
        return QForm(
            q.tower,
            pairs=tuple((_normalized(c * s), a) for c in cs for s, a in q.pairs),
            quasilinear=tuple(_normalized(c * d) for c in cs for d in q.quasilinear),
        )
    return QForm(q.tower, diagonal=tuple(_normalized(c * d) for c in cs for d in q.diagonal))


def bilinear_pfister_entries(slots: Sequence[FieldElem], char: int) -> list[FieldElem]:
    """Diagonal of the bilinear Pfister form <<s1,...,sn>>.

    Entry number ``mask`` is prod(s_i for bit i of mask), with sign
    (-1)^popcount outside characteristic 2, so <<a,b>> gives <1,-a,-b,ab>.
    """
    entries = [None] * (1 << len(slots))
    if not slots:
        return []
    one = slots[0].tower.one
    entries[0] = one
    for i, s in enumerate(slots):
        step = 1 << i
        factor = s if char == 2 else -s
        for mask in range(step):
            entries[step + mask] = entries[mask] * factor
    return entries


@dataclass(frozen=True)
class PfisterPres:
    """A symbol <<s1,...,sn>> (char != 2) or <<b1,...,b_{n-1}, a]] (char 2).

    The last ``shared_k`` slots form the shared factor; in characteristic 2 the
    Artin-Schreier slot counts as the innermost of them.
    """

    tower: FieldTower
    slots: tuple = ()
    as_slot: FieldElem | None = None
    shared_k: int = 0

    def __post_init__(self):
        T = self.tower
        slots = tuple(T(s) for s in self.slots)
        if any(not s for s in slots):
            raise InvalidSlot("Pfister slots must be nonzero")
        object.__setattr__(self, "slots", slots)
        if T.p == 2:
            if self.as_slot is None:
                raise InvalidSlot("a characteristic-2 quadratic Pfister form needs an Artin-Schreier slot")
            object.__setattr__(self, "as_slot", T(self.as_slot))
        elif self.as_slot is not None:
            raise InvalidSlot("Artin-Schreier slots exist only in characteristic 2")
        if not 0 <= self.shared_k <= self.fold:
            raise InvalidSlot(f"shared_k={self.shared_k} out of range for a {self.fold}-fold form")

    @property
    def char2(self) -> bool:
        return self.tower.p == 2

    @property
    def fold(self) -> int:
        return len(self.slots) + (1 if self.as_slot is not None else 0)

    @property
    def dim(self) -> int:
        return 1 << self.fold

    def _k(self, k):
        k = self.shared_k if k is None else k
        if not 0 <= k <= self.fold:
            raise InvalidSlot(f"k={k} out of range for a {self.fold}-fold form")
        return k

    def free_slots(self, k: int | None = None) -> tuple:
        """Bilinear slots outside the shared k-fold factor."""
        k = self._k(k)
        cut = len(self.slots) - (k - 1 if self.char2 and k else k)
        return self.slots[:cut]

    def shared_slots(self, k: int | None = None) -> tuple:
        """Bilinear slots inside the shared factor (the AS slot excluded)."""
        k = self._k(k)
        return self.slots[len(self.free_slots(k)):]

    def shared_factor(self, k: int | None = None) -> PfisterPres:
        k = self._k(k)
        if self.char2 and k == 0:
            raise NoSharedFactor("a 0-fold factor is bilinear, not quadratic")
        return PfisterPres(self.tower, self.shared_slots(k), self.as_slot, k)

    def with_shared(self, k: int) -> PfisterPres:
        return PfisterPres(self.tower, self.slots, self.as_slot, k)

    def __str__(self):
        body = ", ".join(map(str, self.slots))
        if self.char2:
            body = f"{body}; {self.as_slot}" if self.slots else f"; {self.as_slot}"
        s = f"pf[{body}]"
        return f"{s} | {self.shared_k}" if self.shared_k else s


def expand(p: PfisterPres) -> QForm:
    """The 2^n-dimensional quadratic form of a presentation."""
    T = p.tower
    if p.char2:
        entries = bilinear_pfister_entries(p.slots, 2) or [T.one]
        return pairs_form(T, [(e, p.as_slot) for e in entries])
    entries = bilinear_pfister_entries(p.slots, T.p) or [T.one]
    return diag(T, entries)


def pure_part(slots: Sequence[FieldElem], char: int) -> list[FieldElem]:
    """Entries of the bilinear Pfister form on ``slots`` with the leading <1> removed."""
    return bilinear_pfister_entries(slots, char)[1:]


def theta_complement(p: PfisterPres, k: int | None = None) -> QForm:
    """The form theta with expand(p) = expand(pi) + theta, pi the shared k-fold factor."""
    k = p.shared_k if k is None else k
    if k <= 0:
        raise NoSharedFactor("theta complement needs a shared factor (k >= 1)")
    pi = expand(p.shared_factor(k))
    free = p.free_slots(k)
    if not free:
        return empty_form(p.tower)
    return tensor_bilinear(pure_part(free, p.tower.p), pi)


@dataclass(frozen=True)
class GramSpace:
    """A form together with its polar matrix B(v,w) = f(v+w) - f(v) - f(w)."""

    form: QForm
    polar: tuple

    @property
    def dimension(self) -> int:
        return self.form.dim

    @property
    def tower(self) -> FieldTower:
        return self.form.tower

    @property
    def degenerate(self) -> bool:
        """True when some basis vector is orthogonal to everything."""
        zero = self.tower.zero
        return any(all(x == zero for x in row) for row in self.polar)

    def value(self, v: Sequence) -> FieldElem:
        return evaluate(self.form, v)

    def bilinear(self, v: Sequence, w: Sequence) -> FieldElem:
        T = self.tower
        total = T.zero
        for i, vi in enumerate(v):
            if not vi:
                continue
            row = self.polar[i]
            for j, wj in enumerate(w):
                if wj and row[j]:
                    total = total + T(vi) * row[j] * T(wj)
        return total


def gram(f: QForm) -> GramSpace:
    T = f.tower
    n = f.dim
    rows = [[T.zero] * n for _ in range(n)]
    if not f.char2:
        for i, d in enumerate(f.diagonal):
            rows[i][i] = d + d
    else:
        for i, (c, _) in enumerate(f.pairs):
            rows[2 * i][2 * i + 1] = c
            rows[2 * i + 1][2 * i] = c
    return GramSpace(f, tuple(tuple(r) for r in rows))
