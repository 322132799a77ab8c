"""Isotropy, Witt index, hyperbolicity and isometry, dispatched on the tower."""
from __future__ import annotations

from fractions import Fraction

from pfq.errors import Degenerate, OddDimension, ResidueChar2, SingularInput, TowerMismatch
from pfq.fields import PRIME, REALS, squarefree_part, valuation_split
from pfq.forms import PfisterPres, QForm, diag, expand, gram, negate, orth_sum, pairs_form
from pfq.linalg import nullspace
from pfq.oracles import char2, rational
from pfq.oracles.decision import DEFAULT_BUDGET, Decision, SearchBudget, Verdict, WittReport


def _check_diagonal(f: QForm):
    if any(not d for d in f.diagonal):
        raise Degenerate(f"zero entry in {f}")


def springer_split(f: QForm, var: str | None = None) -> tuple[QForm, QForm]:
    """Residue forms (unit part, uniformizer part) one level down the tower."""
    T = f.tower
    if T.p == 2:
        raise ResidueChar2(f"Springer's theorem needs residue characteristic != 2, tower is {T}")
    if not T.laurent:
        raise ValueError(f"{T} has no Laurent level")
    _check_diagonal(f)
    low = T.lower()
    q0, q1 = [], []
    for d in f.diagonal:
        v, res = valuation_split(d, var)
        (q1 if v % 2 else q0).append(res)
    return diag(low, q0), diag(low, q1)


def _split_indices(f: QForm):
    idx0, idx1 = [], []
    for i, d in enumerate(f.diagonal):
        v, _ = valuation_split(d)
        (idx1 if v % 2 else idx0).append(i)
    return idx0, idx1


def _sqrt_mod(a: int, p: int) -> int | None:
    a %= p
    for x in range(p):
        if x * x % p == a:
            return x
    return None


def _isotropic_base(f: QForm) -> Decision:
    T = f.tower
    n = f.dim
    vals = [d.constant() for d in f.diagonal]
    if T.base == REALS:
        pos = [i for i, a in enumerate(vals) if a > 0]
        neg = [i for i, a in enumerate(vals) if a < 0]
        if not pos or not neg:
            return Decision.no_("definite over the reals")
        # normalized entries are +1 and -1
        v = [0] * n
        v[pos[0]] = v[neg[0]] = 1
        return Decision.isotropic(f, v, "entries of opposite sign")
    if T.base == PRIME:
        p = T.p
        if n == 1:
            return Decision.no_("one-dimensional")
        if n == 2:
            a, b = vals
            t = _sqrt_mod(-b * pow(a, -1, p), p)
            if t is None:
                return Decision.no_("-ab is not a square")
            return Decision.isotropic(f, [t, 1], "-ab is a square")
        a, b, c = vals[:3]
        binv = pow(b, -1, p)
        for x in range(p):
            t = (-c - a * x * x) * binv % p
            if t and pow(t, (p - 1) // 2, p) != 1:
                continue
            y = _sqrt_mod(t, p)
            if y is not None:
                return Decision.isotropic(f, [x, y, 1] + [0] * (n - 3), "exhaustion over the prime field")
        raise AssertionError("ternary forms over finite fields are isotropic")
    # rationals
    ints = []
    for q in vals:
        assert isinstance(q, Fraction) and q.denominator == 1, "diagonal entries must be normalized"
        ints.append(int(q))
    w = rational.find_isotropic_vector(ints)
    if w is None:
        return Decision.no_("locally anisotropic at some place")
    return Decision.isotropic(f, [T(x) for x in w], "Hasse-Minkowski, then height search")


def _isotropic_diag(f: QForm) -> Decision:
    T = f.tower
    if not T.laurent:
        return _isotropic_base(f)
    q0, q1 = springer_split(f)
    idx0, idx1 = _split_indices(f)
    for q, idx in ((q0, idx0), (q1, idx1)):
        if q.dim < 2:
            continue
        d = _isotropic_diag(q)
        if d.yes:
            v = [T.zero] * f.dim
            for i, x in zip(idx, d.certificate):
                v[i] = T.lift(x)
            return Decision.isotropic(f, v, f"Springer residue form at {T.laurent[-1]}")
    return Decision.no_("both residue forms anisotropic")


def is_isotropic(f: QForm, budget: SearchBudget = DEFAULT_BUDGET) -> Decision:
    if f.dim == 0:
        raise ValueError("isotropy of the zero form")
    if f.char2:
        return char2.is_isotropic_char2(f, budget)
    _check_diagonal(f)
    if f.dim == 1:
        return Decision.no_("one-dimensional")
    return _isotropic_diag(f)


# -- hyperbolic splitting ---------------------------------------------------------


def split_hyperbolic_plane(f: QForm, v) -> QForm:
    """The orthogonal complement of a hyperbolic plane through the isotropic v."""
    T = f.tower
    g = gram(f)
    n = f.dim
    v = [T(x) for x in v]
    bv = [sum((v[i] * g.polar[i][j] for i in range(n) if v[i]), T.zero) for j in range(n)]
    j = next(k for k in range(n) if bv[k])
    rows = [bv, list(g.polar[j])]
    basis = nullspace(rows, n, T)
    if not f.char2:
        return diag(T, _diagonalize(g, basis))
    pairs = _symplectic(g, basis)
    return pairs_form(T, pairs)


def _diagonalize(g, basis):
    T = g.tower
    basis = [list(b) for b in basis]
    out = []
    while basis:
        k = next((i for i, u in enumerate(basis) if g.value(u)), None)
        if k is None:
            pair = next(
                ((i, j) for i in range(len(basis)) for j in range(i + 1, len(basis)) if g.bilinear(basis[i], basis[j])),
                None,
            )
            if pair is None:
                raise Degenerate("degenerate complement during diagonalization")
            i, j = pair
            basis[i] = [a + b for a, b in zip(basis[i], basis[j])]
            k = i
        u = basis.pop(k)
        qu = g.value(u)
        out.append(qu)
        two_q = qu + qu
        rest = []
        for w in basis:
            c = g.bilinear(w, u) / two_q
            rest.append([a - c * b for a, b in zip(w, u)] if c else w)
        basis = rest
    return out


def _symplectic(g, basis):
    T = g.tower
    basis = [list(b) for b in basis]
    pairs = []
    while basis:
        u1 = basis.pop(0)
        k = next((i for i, w in enumerate(basis) if g.bilinear(u1, w)), None)
        if k is None:
            raise SingularInput("singular complement during symplectic reduction")
        w = basis.pop(k)
        u2 = [x / g.bilinear(u1, w) for x in w]
        q1, q2 = g.value(u1), g.value(u2)
        if q1:
            pairs.append((q1, q1 * q2))
        elif q2:
            pairs.append((q2, q1 * q2))
        else:
            pairs.append((T.one, T.zero))
        rest = []
        for x in basis:
            c1, c2 = g.bilinear(x, u1), g.bilinear(x, u2)
            rest.append([a + c2 * b1 + c1 * b2 for a, b1, b2 in zip(x, u1, u2)])
        basis = rest
    return pairs


# -- Witt index -------------------------------------------------------------------


def _cancel_diag(entries):
    """Remove pairs a, -a; returns (number removed, rest)."""
    rest, planes = [], 0
    for a in entries:
        k = next((i for i, b in enumerate(rest) if b == -a), None)
        if k is None:
            rest.append(a)
        else:
            rest.pop(k)
            planes += 1
    return planes, rest


def _cancel_pairs(f: QForm):
    """c[1,a] + c[1,b] = H + c[1,a+b], and c[1,a] = H when a = r^2 + r."""
    T = f.tower
    pieces = list(f.pairs)
    planes = 0
    changed = True
    while changed:
        changed = False
        for i in range(len(pieces)):
            for j in range(i + 1, len(pieces)):
                if pieces[i][0] == pieces[j][0]:
                    c = pieces[i][0]
                    merged = (c, pieces[i][1] + pieces[j][1])
                    pieces = pieces[:i] + [merged] + pieces[i + 1:j] + pieces[j + 1:]
                    planes += 1
                    changed = True
                    break
            if changed:
                break
        keep = []
        for c, a in pieces:
            if char2.artin_schreier_root(a) is not None:
                planes += 1
                changed = True
            else:
                keep.append((c, a))
        pieces = keep
    return planes, pairs_form(T, pieces, normalize=False)


def _witt_exact_diag(f: QForm) -> int:
    T = f.tower
    if T.laurent:
        q0, q1 = springer_split(f)
        return _witt_exact_diag(q0) + _witt_exact_diag(q1)
    n = f.dim
    if n < 2:
        return 0
    vals = [d.constant() for d in f.diagonal]
    if T.base == REALS:
        pos = sum(1 for a in vals if a > 0)
        return min(pos, n - pos)
    if T.base == PRIME:
        if n % 2:
            return (n - 1) // 2
        p = T.p
        disc = (-1) ** (n // 2)
        for a in vals:
            disc = disc * a % p
        hyperbolic = pow(disc % p, (p - 1) // 2, p) == 1
        return n // 2 if hyperbolic else n // 2 - 1
    planes, rest = _cancel_diag(list(f.diagonal))
    ints = [squarefree_part(c.numerator * c.denominator) for c in (Fraction(d.constant()) for d in rest)]
    return planes + rational.witt_index_q(ints)


def _witt_by_splitting(f: QForm, budget: SearchBudget) -> tuple[int, bool, list]:
    """Repeated isotropic-vector search and splitting; (index, exact, certificates)."""
    planes, certs = 0, []
    while f.dim >= 2:
        d = is_isotropic(f, budget)
        if d.unknown:
            return planes, False, certs
        if d.no:
            return planes, True, certs
        certs.append(d.certificate)
        f = split_hyperbolic_plane(f, d.certificate)
        planes += 1
    return planes, True, certs


def witt_index(f: QForm, budget: SearchBudget = DEFAULT_BUDGET, method: str = "auto") -> WittReport:
    """Witt index; ``method="split"`` forces certificate splitting (cross-check path)."""
    if not f.nonsingular:
        raise SingularInput("Witt index needs a nonsingular form")
    if not f.char2:
        _check_diagonal(f)
    if f.dim == 0:
        return WittReport(0, 0, True)
    if method == "split":
        w, exact, certs = _witt_by_splitting(f, budget)
        return WittReport(w, f.dim - 2 * w, exact, tuple(certs))
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    if f.char2:
        planes, rest = _cancel_pairs(f)
        w, exact, certs = _witt_by_splitting(rest, budget)
        w += planes
        return WittReport(w, f.dim - 2 * w, exact, tuple(certs))
    w = _witt_exact_diag(f)
    return WittReport(w, f.dim - 2 * w, True)


def is_hyperbolic(f: QForm | PfisterPres, budget: SearchBudget = DEFAULT_BUDGET) -> Decision:
    """Hyperbolicity; for a Pfister presentation one isotropic vector suffices."""
    if isinstance(f, PfisterPres):
        q = expand(f)
        d = is_isotropic(q, budget)
        if d.yes:
            return Decision(Verdict.YES, d.certificate, None, "isotropic Pfister form")
        return d
    if f.dim % 2:
        raise OddDimension(f"dimension {f.dim} is odd")
    if not f.nonsingular:
        raise SingularInput("hyperbolicity needs a nonsingular form")
    rep = witt_index(f, budget)
    if 2 * rep.witt_index == f.dim:
        return Decision(Verdict.YES, None, None, f"Witt index {rep.witt_index} = dim/2")
    if rep.exact:
        return Decision.no_(f"Witt index {rep.witt_index} < {f.dim // 2}")
    return Decision.unknown_(
        {"witt_index_lower_bound": rep.witt_index},
        "search inconclusive below dim/2",
    )


def isometric(f: QForm, g: QForm, budget: SearchBudget = DEFAULT_BUDGET) -> Decision:
    """Isometry via Witt cancellation: f = g iff f + (-g) is hyperbolic."""
    if f.tower != g.tower:
        raise TowerMismatch(f"{f.tower} vs {g.tower}")
    if not (f.nonsingular and g.nonsingular):
        raise SingularInput("isometry test needs nonsingular forms")
    if f.dim != g.dim:
        return Decision.no_(f"dimensions {f.dim} and {g.dim} differ")
    if f.dim == 0:
        return Decision(Verdict.YES, None, None, "zero forms")
    return is_hyperbolic(orth_sum(f, negate(g)), budget)


def signature(f: QForm) -> tuple[int, int]:
    """(positive, negative) counts of a diagonal form over the ordered reals."""
    if f.tower.base != REALS or f.tower.laurent:
        raise TowerMismatch(f"signature is defined here only over R, not {f.tower}")
    _check_diagonal(f)
    pos = sum(1 for d in f.diagonal if d.constant() > 0)
    return pos, f.dim - pos
