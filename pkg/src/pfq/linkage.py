"""Linkage criteria, the chain step, and presentation moves.

Two presentations are compared through their last k slots; linkage questions
reduce to the isotropy of a witness form omega built from the theta
complements.
"""
from __future__ import annotations

import dataclasses
import itertools
from dataclasses import dataclass
from typing import Sequence

from pfq.errors import (
    DimensionMismatch,
    InvalidMoveParameter,
    NoAnisotropicVector,
    SharedSlotMismatch,
    TowerMismatch,
    WrongCharacteristic,
)
from pfq.fields import FieldElem
from pfq.forms import GramSpace, PfisterPres, QForm, negate, orth_sum, pairs_form, theta_complement
from pfq.linalg import nullspace
from pfq.oracles import DEFAULT_BUDGET, Decision, SearchBudget, Verdict, is_isotropic


def check_shared(p1: PfisterPres, p2: PfisterPres, k: int):
    if p1.tower != p2.tower:
        raise TowerMismatch(f"{p1.tower} vs {p2.tower}")
    if k < 1:
        raise SharedSlotMismatch(f"linkage needs k >= 1, got {k}")
    for p in (p1, p2):
        if p.fold < k:
            raise SharedSlotMismatch(f"{p} has fewer than {k} slots")
    if p1.shared_slots(k) != p2.shared_slots(k) or p1.as_slot != p2.as_slot:
        raise SharedSlotMismatch(f"last {k} slots of {p1} and {p2} differ")


@dataclass(frozen=True)
class LinkageVerdict:
    linked: Decision
    omega: QForm

    def to_json(self) -> dict:
        return {**self.linked.to_json(), "omega": str(self.omega), "omega_dim": self.omega.dim}


def omega_inseparable(p1: PfisterPres, p2: PfisterPres, k: int) -> QForm:
    """theta_1 + theta_2 + <1>, the witness for inseparable k-linkage (char 2)."""
    if p1.tower.p != 2:
        raise WrongCharacteristic("inseparable linkage is a characteristic-2 notion")
    check_shared(p1, p2, k)
    T = p1.tower
    one = pairs_form(T, [], [T.one])
    return orth_sum(orth_sum(theta_complement(p1, k), theta_complement(p2, k)), one)


def inseparably_k_linked(p1: PfisterPres, p2: PfisterPres, k: int, budget: SearchBudget = DEFAULT_BUDGET) -> LinkageVerdict:
    omega = omega_inseparable(p1, p2, k)
    return LinkageVerdict(is_isotropic(omega, budget), omega)


def omega_separable(p1: PfisterPres, p2: PfisterPres, k: int) -> QForm:
    """theta_1 + (-theta_2): what is left of p1 + (-p2) after 2^k hyperbolic planes."""
    check_shared(p1, p2, k)
    return orth_sum(theta_complement(p1, k), negate(theta_complement(p2, k)))


def k_plus_one_linked(p1: PfisterPres, p2: PfisterPres, k: int, budget: SearchBudget = DEFAULT_BUDGET) -> LinkageVerdict:
    omega = omega_separable(p1, p2, k)
    if omega.dim == 0:
        # both forms equal the shared factor
        return LinkageVerdict(Decision(Verdict.YES, None, None, "both forms are the shared factor"), omega)
    return LinkageVerdict(is_isotropic(omega, budget), omega)


# -- chain step ---------------------------------------------------------------------


@dataclass(frozen=True)
class ChainStep:
    gamma: FieldElem
    vector: tuple
    enlarged: tuple = ()


def _span_vectors(basis, tower, height):
    """Integer combinations of ``basis``: by height, then earlier basis vectors first.

    The leading nonzero coefficient is positive, so each line is visited once.
    """
    n = len(basis)
    vals = [0]
    for h in range(1, height + 1):
        vals += [h, -h]
        for rev in itertools.product(vals, repeat=n):
            coeffs = rev[::-1]
            if max(abs(c) for c in coeffs) != h:
                continue
            if next(c for c in coeffs if c) < 0:
                continue
            v = [tower.zero] * len(basis[0])
            for c, b in zip(coeffs, basis):
                if c:
                    v = [x + c * y for x, y in zip(v, b)]
            yield v


def chain_step(
    psi: GramSpace,
    V1: Sequence[Sequence],
    V2: Sequence[Sequence],
    phi1: PfisterPres | None = None,
    phi2: PfisterPres | None = None,
    budget: SearchBudget = DEFAULT_BUDGET,
) -> ChainStep:
    """Pick v orthogonal to V1 and V2 with psi(v) != 0 and return gamma = -psi(v).

    When the factors ``phi1``/``phi2`` are given, the enlarged presentations
    <<gamma>> (x) phi_i are returned as well, for checking against psi.
    """
    T = psi.tower
    n = psi.dimension
    V1 = [[T(x) for x in v] for v in V1]
    V2 = [[T(x) for x in v] for v in V2]
    if not V1 or len(V1) != len(V2) or len(V1) >= n:
        raise DimensionMismatch(f"subspaces of dimension {len(V1)}, {len(V2)} in a {n}-dimensional space")
    if any(len(v) != n for v in V1 + V2):
        raise DimensionMismatch("basis vectors have the wrong length")
    rows = [[psi.bilinear(v, [T.one if i == j else T.zero for i in range(n)]) for j in range(n)] for v in V1 + V2]
    basis = nullspace(rows, n, T)
    if not basis:
        raise NoAnisotropicVector("the orthogonal complements meet only in 0")
    count = 0
    for v in _span_vectors(basis, T, budget.max_coeff_height):
        count += 1
        if count > budget.max_candidates:
            break
        val = psi.value(v)
        if val:
            gamma = -val
            enlarged = tuple(
                PfisterPres(T, (gamma,) + phi.slots, phi.as_slot, phi.fold)
                for phi in (phi1, phi2)
                if phi is not None
            )
            return ChainStep(gamma, tuple(v), enlarged)
    raise NoAnisotropicVector(f"psi vanishes on every enumerated vector of the intersection ({count} tried)")


# -- moves ----------------------------------------------------------------------------


@dataclass(frozen=True)
class SlotSquareScale:
    """slot i -> slot i * s^2."""

    i: int
    s: object


@dataclass(frozen=True)
class SlotSwap:
    """Exchange slots i and i+1."""

    i: int


@dataclass(frozen=True)
class PairTwist:
    """(a, b) -> (a, -ab) on slots i, i+1."""

    i: int


@dataclass(frozen=True)
class NormScale:
    """(a, b) -> (a, b*(s^2 - a*t^2)) on slots i, i+1."""

    i: int
    s: object
    t: object


@dataclass(frozen=True)
class ArtinSchreierShift:
    """Artin-Schreier slot a -> a + f^2 + f (char 2)."""

    f: object


@dataclass(frozen=True)
class Char2NormScale:
    """slot b_i -> b_i * (g^2 + g*h + a*h^2), a the Artin-Schreier slot (char 2)."""

    i: int
    g: object
    h: object


Move = SlotSquareScale | SlotSwap | PairTwist | NormScale | ArtinSchreierShift | Char2NormScale


def move_slots(p: PfisterPres, m) -> set[int]:
    """1-based slot positions a move rewrites (the AS slot is position fold)."""
    if isinstance(m, (SlotSquareScale, Char2NormScale)):
        return {m.i}
    if isinstance(m, SlotSwap):
        return {m.i, m.i + 1}
    if isinstance(m, (PairTwist, NormScale)):
        return {m.i + 1}
    if isinstance(m, ArtinSchreierShift):
        return {p.fold}
    raise TypeError(f"not a move: {m!r}")


def move_support(p: PfisterPres, m) -> set[int]:
    """Positions a move reads or writes; in char 2 the AS slot (position fold) is always in."""
    if isinstance(m, (SlotSquareScale, ArtinSchreierShift)):
        out = move_slots(p, m)
    elif isinstance(m, Char2NormScale):
        out = {m.i}
    else:
        out = {m.i, m.i + 1}
    if p.char2:
        out.add(p.fold)
    return out


def local_factor(p: PfisterPres, support: set[int]) -> PfisterPres:
    """The sub-presentation on the given positions; p is <<other slots>> (x) this."""
    slots = tuple(s for j, s in enumerate(p.slots, 1) if j in support)
    return PfisterPres(p.tower, slots, p.as_slot, 0)


def _slot_index(p: PfisterPres, i: int, width: int = 1) -> int:
    if not 1 <= i or i + width - 1 > len(p.slots):
        raise InvalidMoveParameter(f"slot {i} out of range for {p}")
    return i - 1


def apply_move(p: PfisterPres, m) -> PfisterPres:
    """Rewrite a presentation into another presentation of the same form."""
    T = p.tower
    slots = list(p.slots)
    as_slot = p.as_slot
    if isinstance(m, SlotSquareScale):
        j = _slot_index(p, m.i)
        s = T(m.s)
        if not s:
            raise InvalidMoveParameter("square scale by zero")
        slots[j] = slots[j] * s * s
    elif isinstance(m, SlotSwap):
        j = _slot_index(p, m.i, 2)
        slots[j], slots[j + 1] = slots[j + 1], slots[j]
    elif isinstance(m, PairTwist):
        j = _slot_index(p, m.i, 2)
        slots[j + 1] = -slots[j] * slots[j + 1]
    elif isinstance(m, NormScale):
        j = _slot_index(p, m.i, 2)
        s, t = T(m.s), T(m.t)
        norm = s * s - slots[j] * t * t
        if not norm:
            raise InvalidMoveParameter(f"s^2 - a t^2 vanishes for a = {slots[j]}")
        slots[j + 1] = slots[j + 1] * norm
    elif isinstance(m, ArtinSchreierShift):
        if not p.char2:
            raise InvalidMoveParameter("Artin-Schreier shifts need characteristic 2")
        f = T(m.f)
        as_slot = as_slot + f * f + f
    elif isinstance(m, Char2NormScale):
        if not p.char2:
            raise InvalidMoveParameter("this norm scaling needs characteristic 2")
        j = _slot_index(p, m.i)
        g, h = T(m.g), T(m.h)
        norm = g * g + g * h + as_slot * h * h
        if not norm:
            raise InvalidMoveParameter("g^2 + gh + a h^2 vanishes")
        slots[j] = slots[j] * norm
    else:
        raise TypeError(f"not a move: {m!r}")
    return PfisterPres(T, tuple(slots), as_slot, p.shared_k)


# -- tuple-level rewriting -------------------------------------------------------------


@dataclass(frozen=True)
class Step:
    """One scripted move; ``target`` is a presentation index, or None for lockstep.

    Lockstep moves count slots from the start of the shared block, so the
    same step lands on the same shared slot whatever the free parts are.
    """

    move: object
    target: int | None = None


def touches_shared(p: PfisterPres, m, k: int) -> bool:
    first_shared = len(p.free_slots(k)) + 1
    return any(pos >= first_shared for pos in move_slots(p, m))


def _shift(m, offset: int):
    if not hasattr(m, "i"):
        return m
    if m.i < 1:
        raise InvalidMoveParameter(f"shared slot {m.i} out of range")
    return dataclasses.replace(m, i=m.i + offset)


def rewrite_tuple(presentations: Sequence[PfisterPres], k: int, script: Sequence[Step]) -> tuple:
    """Apply a move script to a tuple of presentations sharing their last k slots.

    Moves that rewrite a shared slot must be lockstep (target None); the
    shared slots are checked again once the script has run.
    """
    ps = list(presentations)
    for step in script:
        if step.target is None:
            ps = [apply_move(p, _shift(step.move, len(p.free_slots(k)))) for p in ps]
            continue
        if not 0 <= step.target < len(ps):
            raise InvalidMoveParameter(f"no presentation {step.target} in a tuple of {len(ps)}")
        p = ps[step.target]
        if touches_shared(p, step.move, k):
            raise SharedSlotMismatch(f"{step.move} rewrites a shared slot; apply it to every presentation")
        ps[step.target] = apply_move(p, step.move)
    for p in ps[1:]:
        check_shared(ps[0], p, k)
    return tuple(ps)


# -- bounded search for a common factor -----------------------------------------------


@dataclass(frozen=True)
class FactorSearch:
    factor: PfisterPres | None
    tried: int
    exact: bool


def find_shared_factor(
    p1: PfisterPres,
    p2: PfisterPres,
    k: int,
    pool: Sequence,
    budget: SearchBudget = DEFAULT_BUDGET,
) -> FactorSearch:
    """Look for a k-fold <<c1..ck>> over ``pool`` that is a subform of both forms.

    A Pfister subform of a Pfister form is a factor, and pi sits inside psi
    exactly when psi + (-pi) has Witt index >= dim pi.  Semidecidable: a miss
    only says nothing in the pool works.  Characteristic != 2.
    """
    from pfq.forms import expand
    from pfq.oracles import witt_index

    T = p1.tower
    if T.p == 2:
        raise WrongCharacteristic("the factor search covers characteristic != 2")
    pool = sorted({T(c) for c in pool if T(c)}, key=str)
    f1, f2 = expand(p1), expand(p2)
    tried = 0
    exact = True
    for combo in itertools.combinations_with_replacement(pool, k):
        tried += 1
        if tried > budget.max_candidates:
            break
        pi = expand(PfisterPres(T, combo))
        ok = True
        for f in (f1, f2):
            rep = witt_index(orth_sum(f, negate(pi)), budget)
            exact = exact and rep.exact
            if rep.witt_index < pi.dim:
                ok = False
                break
        if ok:
            return FactorSearch(PfisterPres(T, combo, None, k), tried, exact)
    return FactorSearch(None, tried, exact)
