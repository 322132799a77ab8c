"""Exact Gaussian elimination over a tower."""
from __future__ import annotations

from pfq.fields import FieldElem, FieldTower


def rref(rows: list[list[FieldElem]], tower: FieldTower) -> tuple[list[list[FieldElem]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv if x else x for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b if b else a for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(rows: list[list[FieldElem]], ncols: int, tower: FieldTower) -> list[list[FieldElem]]:
    """Basis of {v : rows . v = 0}, one vector per free column in increasing order."""
    if not rows:
        return [[tower.one if i == j else tower.zero for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(rows, tower)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [tower.zero] * ncols
        v[fc] = tower.one
        for row, pc in zip(red, pivots):
            if row[fc]:
                v[pc] = -row[fc]
        basis.append(v)
    return basis
