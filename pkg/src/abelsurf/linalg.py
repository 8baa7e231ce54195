"""Exact dense linear algebra over the coefficient fields."""

from __future__ import annotations

__all__ = ["rref", "nullspace", "solve", "rank", "row_space_equal", "det"]


def rref(rows, ncols: int | None = None):
    """Reduced row echelon form.  Returns (rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def nullspace(rows, ncols: int, zero, one):
    """Basis of {v : A v = 0}, one vector per free column."""
    red, piv = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for r, c in zip(red, piv):
            v[c] = -r[f]
        basis.append(v)
    return basis


def solve(rows, rhs, ncols: int, zero):
    """A particular solution of A v = b with free variables set to zero, or None."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, piv = rref(aug, ncols + 1)
    if ncols in piv:
        return None
    v = [zero] * ncols
    for r, c in zip(red, piv):
        v[c] = r[ncols]
    return v


def row_space_equal(a, b, ncols: int) -> bool:
    ra, _ = rref(a, ncols) if a else ([], [])
    rb, _ = rref(b, ncols) if b else ([], [])
    return ra == rb


def det(m, one):
    """Determinant by elimination."""
    a = [list(r) for r in m]
    n = len(a)
    d = one
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return one * 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            d = -d
        d = d * a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return d
