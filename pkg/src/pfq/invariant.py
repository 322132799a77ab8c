"""The k-invariant of linked Pfister forms and harnesses that exercise its theorems."""
from __future__ import annotations

import dataclasses
import random
from dataclasses import dataclass, field
from typing import Sequence

from pfq.errors import InvalidMoveParameter, SharedSlotMismatch, TowerLacksSqrtMinusOne
from pfq.fields import FieldElem, FieldTower
from pfq.forms import PfisterPres, expand
from pfq.linkage import (
    ArtinSchreierShift,
    Char2NormScale,
    NormScale,
    PairTwist,
    SlotSquareScale,
    SlotSwap,
    Step,
    apply_move,
    check_shared,
    inseparably_k_linked,
    local_factor,
    move_support,
    rewrite_tuple,
)
from pfq.oracles import DEFAULT_BUDGET, Decision, SearchBudget, Verdict, is_hyperbolic, isometric


@dataclass(frozen=True)
class LinkedTuple:
    presentations: tuple
    k: int

    def __post_init__(self):
        ps = tuple(self.presentations)
        if not ps:
            raise SharedSlotMismatch("empty tuple")
        object.__setattr__(self, "presentations", tuple(p.with_shared(self.k) for p in ps))
        for p in ps[1:]:
            check_shared(ps[0], p, self.k)
        if len(ps) == 1:
            check_shared(ps[0], ps[0], self.k)

    @property
    def tower(self) -> FieldTower:
        return self.presentations[0].tower

    @property
    def folds(self) -> tuple:
        return tuple(p.fold for p in self.presentations)

    def __len__(self):
        return len(self.presentations)


@dataclass(frozen=True)
class InvariantResult:
    presentation: PfisterPres
    fold: int


def invariant_pair(p1: PfisterPres, p2: PfisterPres, k: int) -> InvariantResult:
    """free(p1) ++ free(p2) ++ shared slots, a (n1 + n2 - k)-fold presentation."""
    check_shared(p1, p2, k)
    slots = p1.free_slots(k) + p2.free_slots(k) + p1.shared_slots(k)
    out = PfisterPres(p1.tower, slots, p1.as_slot, k)
    assert out.fold == p1.fold + p2.fold - k
    return InvariantResult(out, out.fold)


def invariant_tuple(t: LinkedTuple) -> InvariantResult:
    if len(t) < 2:
        raise SharedSlotMismatch("the invariant needs at least two forms")
    acc = t.presentations[0]
    for p in t.presentations[1:]:
        acc = invariant_pair(acc, p, t.k).presentation
    return InvariantResult(acc, acc.fold)


# -- harnesses ----------------------------------------------------------------------


@dataclass(frozen=True)
class InstanceReport:
    instance: LinkedTuple
    invariant: PfisterPres
    decision: Decision
    note: str = ""

    def to_json(self) -> dict:
        out = {
            "forms": [str(p) for p in self.instance.presentations],
            "k": self.instance.k,
            "invariant": str(self.invariant),
            **self.decision.to_json(),
        }
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class HarnessReport:
    name: str
    instances: tuple = ()

    def count(self, verdict: Verdict) -> int:
        return sum(1 for r in self.instances if r.decision.verdict is verdict)

    @property
    def all_yes(self) -> bool:
        return all(r.decision.yes for r in self.instances)

    def to_json(self) -> dict:
        return {
            "harness": self.name,
            "count": len(self.instances),
            "yes": self.count(Verdict.YES),
            "no": self.count(Verdict.NO),
            "unknown": self.count(Verdict.UNKNOWN),
            "instances": [r.to_json() for r in self.instances],
        }


@dataclass(frozen=True)
class InvarianceReport:
    before: PfisterPres
    after: PfisterPres
    decision: Decision

    def to_json(self) -> dict:
        return {"before": str(self.before), "after": str(self.after), **self.decision.to_json()}


def lift_step(t: LinkedTuple, step: Step):
    """The move a tuple step induces on the invariant presentation."""
    frees = [len(p.free_slots(t.k)) for p in t.presentations]
    off = sum(frees) if step.target is None else sum(frees[: step.target])
    m = step.move
    return dataclasses.replace(m, i=m.i + off) if hasattr(m, "i") else m


def certify_chain(t: LinkedTuple, script: Sequence[Step], budget: SearchBudget = DEFAULT_BUDGET):
    """Follow a script on the invariant one move at a time.

    Each move touches a few slots, so the invariant is <<untouched>> (x) F
    with only F changing; isometry of F before and after is enough.  Returns
    the final invariant and one Decision per step.
    """
    inv = invariant_tuple(t).presentation
    ps = t.presentations
    decisions = []
    for step in script:
        m = lift_step(t, step)
        nxt = apply_move(inv, m)
        ps = rewrite_tuple(ps, t.k, [step])
        if nxt != invariant_tuple(LinkedTuple(ps, t.k)).presentation:
            raise AssertionError(f"{step} does not commute with the invariant")
        support = move_support(inv, m)
        a, b = local_factor(inv, support), local_factor(nxt, support)
        if a == b:
            decisions.append(Decision(Verdict.YES, None, None, "unchanged factor"))
        else:
            decisions.append(isometric(expand(a), expand(b), budget))
        inv = nxt
    return inv, decisions


def verify_invariance(
    t: LinkedTuple,
    script_a: Sequence[Step] = (),
    script_b: Sequence[Step] = (),
    budget: SearchBudget = DEFAULT_BUDGET,
) -> InvarianceReport:
    """Rewrite the tuple two ways and compare the invariants up to isometry.

    Exact towers compare the two invariants directly.  In characteristic 2
    the comparison first tries a chain of local certificates through the
    unrewritten invariant, and falls back to the direct search.
    """
    ta = LinkedTuple(rewrite_tuple(t.presentations, t.k, script_a), t.k)
    tb = LinkedTuple(rewrite_tuple(t.presentations, t.k, script_b), t.k)
    a = invariant_tuple(ta).presentation
    b = invariant_tuple(tb).presentation
    if a == b:
        return InvarianceReport(a, b, Decision(Verdict.YES, None, None, "identical presentations"))
    if t.tower.p == 2:
        steps = certify_chain(t, script_a, budget)[1] + certify_chain(t, script_b, budget)[1]
        if all(d.yes for d in steps):
            why = f"chain of {len(steps)} local isometries"
            return InvarianceReport(a, b, Decision(Verdict.YES, None, None, why))
    return InvarianceReport(a, b, isometric(expand(a), expand(b), budget))


def verify_thm41_part1(instances: Sequence[LinkedTuple], budget: SearchBudget = DEFAULT_BUDGET) -> HarnessReport:
    """Char 2: forms sharing a quadratic and a bilinear factor have a hyperbolic invariant."""
    out = []
    for t in instances:
        if t.tower.p != 2:
            raise SharedSlotMismatch("this harness runs in characteristic 2")
        inv = invariant_tuple(t).presentation
        out.append(InstanceReport(t, inv, is_hyperbolic(inv, budget)))
    return HarnessReport("thm41-part1", tuple(out))


def verify_thm41_part2(instances: Sequence[LinkedTuple], budget: SearchBudget = DEFAULT_BUDGET) -> HarnessReport:
    """Char 2, one form of fold k+1: a trivial invariant should come with an isotropic omega.

    Yes carries the omega certificate.  Unknown means the search found
    nothing, which is consistent with the claim but does not certify it.
    No means the invariant itself was shown nonhyperbolic (hypothesis fails).
    """
    out = []
    for t in instances:
        p1, p2 = t.presentations
        if min(p1.fold, p2.fold) != t.k + 1:
            raise SharedSlotMismatch("one of the two forms must be (k+1)-fold")
        inv = invariant_pair(p1, p2, t.k).presentation
        triv = is_hyperbolic(inv, budget)
        if not triv.yes:
            out.append(InstanceReport(t, inv, triv, "invariant not certified trivial"))
            continue
        d = inseparably_k_linked(p1, p2, t.k, budget).linked
        note = "" if d.yes else "consistent but uncertified"
        out.append(InstanceReport(t, inv, d, note))
    return HarnessReport("thm41-part2", tuple(out))


def verify_thm51(instances: Sequence[LinkedTuple], budget: SearchBudget = DEFAULT_BUDGET) -> HarnessReport:
    """(k+1)-linked pairs over a field where -1 is a square: the k-invariant is hyperbolic."""
    out = []
    for t in instances:
        if not t.tower.minus_one_square:
            raise TowerLacksSqrtMinusOne(f"-1 is not a square in {t.tower}")
        inv = invariant_tuple(t).presentation
        if t.tower.p == 2:
            d = is_hyperbolic(inv, budget)
        else:
            d = is_hyperbolic(expand(inv), budget)
        out.append(InstanceReport(t, inv, d))
    return HarnessReport("thm51", tuple(out))


# -- instance generation -------------------------------------------------------------


def default_pool(tower: FieldTower) -> list[FieldElem]:
    """Small nonzero slot candidates: units of the base times monomials in the variables."""
    T = tower
    if T.p == 2:
        xs = [T.var(v) for v in T.gens]
        pool = list(xs)
        for i, a in enumerate(xs):
            pool.append(a + 1)
            for b in xs[i:]:
                pool.append(a * b)
                pool.append(a * b + a)
                pool.append(a * b + 1)
            for b in xs[i + 1:]:
                pool.append(a + b)
        return pool
    if T.base == "R":
        units = [T(1), T(-1)]
    elif T.base == "Fp":
        units = [T(c) for c in range(1, min(T.p, 7))]
    else:
        units = [T(c) for c in (-7, -5, -3, -2, -1, 2, 3, 5, 6, 7, 10, 11, 13)]
    monos = [T.one]
    for v in T.laurent:
        monos += [m * T.var(v) for m in monos]
    pool = [u * m for u in units for m in monos]
    return [p for p in pool if p != T.one]


@dataclass(frozen=True)
class Profile:
    """What generate_linked_pair should build.

    ``folds`` are the total folds of the forms and ``k`` the shared fold.
    ``shared_bilinear`` puts k common bilinear slots at the front of every
    free part; ``shared_extra`` ends every free part with one common slot,
    making the forms (k+1)-linked.
    """

    tower: FieldTower
    folds: tuple = (2, 2)
    k: int = 1
    pool: tuple | None = None
    shared_bilinear: bool = False
    shared_extra: bool = False

    def slots_pool(self) -> list:
        return [self.tower(x) for x in self.pool] if self.pool else default_pool(self.tower)


def generate_linked_pair(seed: int, profile: Profile) -> LinkedTuple:
    """A reproducible tuple (of len(profile.folds) forms) sharing their last k slots."""
    rng = random.Random(seed)
    T = profile.tower
    k = profile.k
    pool = profile.slots_pool()
    char2 = T.p == 2
    nshared_bil = k - 1 if char2 else k
    shared = [rng.choice(pool) for _ in range(nshared_bil)]
    as_slot = rng.choice(pool) if char2 else None
    front = [rng.choice(pool) for _ in range(k)] if profile.shared_bilinear else []
    extra = [rng.choice(pool)] if profile.shared_extra else []
    out = []
    for n in profile.folds:
        nfree = n - k - len(front) - len(extra)
        if nfree < 0:
            raise ValueError(f"fold {n} too small for profile {profile}")
        free = front + [rng.choice(pool) for _ in range(nfree)] + extra
        out.append(PfisterPres(T, tuple(free + shared), as_slot, k))
    return LinkedTuple(tuple(out), k)


def _nonzero(rng, pool, T):
    return rng.choice(pool) if pool else T.one


def random_move(rng: random.Random, p: PfisterPres, k: int, shared: bool, pool: Sequence) -> object | None:
    """A random move on the free slots of p, or (``shared``) on its shared block.

    Shared-block indices are relative, as rewrite_tuple expects for lockstep steps.
    """
    T = p.tower
    nfree = len(p.free_slots(k))
    lo, hi = (1, len(p.slots) - nfree) if shared else (1, nfree)
    kinds = []
    if hi >= 1:
        kinds += ["square", "c2norm"] if p.char2 else ["square"]
    if hi >= 2:
        kinds += ["swap", "twist", "norm"]
    if p.char2 and shared:
        kinds.append("as")
    if not kinds:
        return None
    kind = rng.choice(kinds)
    if kind == "square":
        return SlotSquareScale(rng.randint(lo, hi), _nonzero(rng, pool, T))
    if kind == "swap":
        return SlotSwap(rng.randint(lo, hi - 1))
    if kind == "twist":
        return PairTwist(rng.randint(lo, hi - 1))
    if kind == "as":
        return ArtinSchreierShift(rng.choice(pool))
    for _ in range(20):
        if kind == "norm":
            i = rng.randint(lo, hi - 1)
            m = NormScale(i, rng.choice([T.zero, T.one, *pool]), rng.choice([T.one, *pool]))
        else:
            m = Char2NormScale(rng.randint(lo, hi), rng.choice([T.zero, T.one, *pool]), rng.choice([T.one, *pool]))
        probe = _with_offset(m, nfree) if shared else m
        try:
            apply_move(p, probe)
            return m
        except InvalidMoveParameter:
            continue
    return SlotSquareScale(rng.randint(lo, hi), T.one)


def _with_offset(m, off):
    return dataclasses.replace(m, i=m.i + off) if hasattr(m, "i") else m


def random_script(rng: random.Random, t: LinkedTuple, length: int, pool: Sequence | None = None) -> list[Step]:
    """Alternate free moves on single forms with lockstep moves on the shared block."""
    pool = list(pool) if pool is not None else default_pool(t.tower)
    ps = list(t.presentations)
    steps = []
    for _ in range(length):
        lockstep = rng.random() < 0.35
        if lockstep:
            m = random_move(rng, ps[0], t.k, True, pool)
            step = Step(m, None)
        else:
            j = rng.randrange(len(ps))
            m = random_move(rng, ps[j], t.k, False, pool)
            step = Step(m, j)
        if m is None:
            continue
        try:
            ps = list(rewrite_tuple(ps, t.k, [step]))
        except (InvalidMoveParameter, SharedSlotMismatch):
            continue
        steps.append(step)
    return steps


# -- separation-theorem bookkeeping ---------------------------------------------------


@dataclass(frozen=True)
class SeparationDims:
    omega_dim: int
    delta_dim: int
    holds: bool
    relation: str = field(default="")

    def to_json(self) -> dict:
        return {"omega_dim": self.omega_dim, "delta_dim": self.delta_dim, "holds": self.holds, "relation": self.relation}


def separation_dims_inseparable(m: int, n: int, k: int) -> SeparationDims:
    """Forms of fold m+k and n+k over a shared k-fold pi (char 2).

    omega = <1> + theta_1 + theta_2, delta the invariant; the separation
    argument needs 2 dim(omega) - 2 < dim(delta), which holds for m, n >= 2.
    """
    w = 2 ** (m + k) + 2 ** (n + k) - 2 ** (k + 1) + 1
    d = 2 ** (n + m + k)
    return SeparationDims(w, d, 2 * w - 2 < d, "2*dim(omega)-2 < dim(delta)")


def separation_dims_separable(m: int, n: int, k: int) -> SeparationDims:
    """Forms of fold m and n, k-linked; omega = theta_1 + theta_2 against delta of fold m+n-k."""
    w = 2**n + 2**m - 2 ** (k + 1)
    d = 2 ** (n + m - k)
    return SeparationDims(w, d, w <= d // 2 < d, "dim(omega) <= dim(delta)/2")


# -- suites -------------------------------------------------------------------------


def thm41_instances(count: int, seed: int = 0, k: int = 1, folds: tuple = (2, 3), tower: FieldTower | None = None) -> list[LinkedTuple]:
    """Char-2 tuples sharing a quadratic k-fold pi and k bilinear slots."""
    from pfq.fields import char2_rational

    T = tower or char2_rational("x", "y")
    prof = Profile(T, tuple(folds), k, shared_bilinear=True)
    return [generate_linked_pair(seed + i, prof) for i in range(count)]


def thm51_instances(count: int, seed: int = 0, ks: Sequence[int] = (1, 2), tower: FieldTower | None = None) -> list[LinkedTuple]:
    """(k+1)-linked pairs over a tower where -1 is a square, cycling through ``ks``."""
    from pfq.fields import prime_field

    T = tower or prime_field(5).laurent_ext("x", "y")
    out = []
    for i in range(count):
        k = ks[i % len(ks)]
        rng = random.Random(seed + i)
        folds = (k + 1 + rng.randint(0, 1), k + 1 + rng.randint(0, 1))
        out.append(generate_linked_pair(seed + i, Profile(T, folds, k, shared_extra=True)))
    return out


def random_instance(seed: int, tower: FieldTower, script_length: int = 4):
    """A linked pair with two random move scripts, all derived from ``seed``."""
    rng = random.Random(seed)
    folds = rng.choice([(2, 2), (3, 2), (2, 3), (3, 3)])
    k = rng.choice([1, 2])
    t = generate_linked_pair(seed, Profile(tower, folds, k))
    return t, random_script(rng, t, script_length), random_script(rng, t, script_length)


def invariance_sweep(tower: FieldTower, count: int, seed: int = 0, budget: SearchBudget = DEFAULT_BUDGET) -> list[InvarianceReport]:
    out = []
    for i in range(count):
        t, a, b = random_instance(seed + i, tower)
        out.append(verify_invariance(t, a, b, budget))
    return out
