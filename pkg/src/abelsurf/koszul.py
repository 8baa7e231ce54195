"""Koszul syzygies of (x0, x1, x2) and symmetric annihilators of x.

Every symmetric 3x3 matrix L of forms with L x = 0 factors as M3 N M3 with
N symmetric, where M3 is the antisymmetric syzygy matrix.  The factorisation
here is computed in the same steps as the classical argument: write L = P M3,
find the scalar lambda with P^t x = lambda x, write P^t - lambda I = Q M3 and
take N = -(Q + Q^t)/2.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import comb

from .exactring import MultiPoly, PolyMatrix, PolyRing, exact_divide, weighted_degree
from .linalg import solve

__all__ = ["koszul_matrix", "kovacec_decompose", "hom_family_dimension", "HomFamily",
           "monomials_of_degree", "KovacecError"]

X = ("x0", "x1", "x2")


class KovacecError(ValueError):
    pass


def koszul_matrix(ring: PolyRing) -> PolyMatrix:
    x0, x1, x2 = (ring.var(v) for v in X)
    z = ring.zero()
    return PolyMatrix(ring, [[z, x2, -x1], [-x2, z, x0], [x1, -x0, z]])


def xbar(ring: PolyRing) -> list:
    return [ring.var(v) for v in X]


def monomials_of_degree(ring: PolyRing, d: int) -> list:
    """Exponent tuples (in ring order) of the degree-d monomials in x0, x1, x2."""
    if d < 0:
        return []
    idx = [ring.index[v] for v in X]
    out = []
    for combo in combinations_with_replacement(range(3), d):
        e = [0] * ring.nvars
        for c in combo:
            e[idx[c]] += 1
        out.append(tuple(e))
    return sorted(out, reverse=True)


def _solve_right_factor(R: PolyMatrix, M: PolyMatrix, deg: int, ring: PolyRing) -> PolyMatrix:
    """Solve X M = R for a 3x3 matrix X of degree-``deg`` forms, row by row."""
    fld = ring.field
    mons = monomials_of_degree(ring, deg)
    nunk = 3 * len(mons)
    out_rows = []
    for i in range(3):
        # unknown (k, mon) contributes coefficient * mon * M[k][j] to column j
        images = []
        for k in range(3):
            for mon in mons:
                mono = MultiPoly(ring, {mon: fld.one})
                images.append([mono * M[k, j] for j in range(3)])
        keys = sorted({(j, e) for im in images for j in range(3) for e in im[j].terms}
                      | {(j, e) for j in range(3) for e in R[i, j].terms})
        rows = [[im[j].terms.get(e, fld.zero) for im in images] for j, e in keys]
        rhs = [R[i, j].terms.get(e, fld.zero) for j, e in keys]
        sol = solve(rows, rhs, nunk, fld.zero)
        if sol is None:
            raise KovacecError("no factorisation through the syzygy matrix")
        row = []
        for k in range(3):
            t = {mon: sol[k * len(mons) + a] for a, mon in enumerate(mons) if sol[k * len(mons) + a]}
            row.append(MultiPoly(ring, t))
        out_rows.append(row)
    return PolyMatrix(ring, out_rows)


def _common_degree(L: PolyMatrix):
    degs = {weighted_degree(L[i, j]) for i in range(3) for j in range(3)} - {"zero"}
    if not degs:
        return None
    if len(degs) != 1 or "inhomogeneous" in degs:
        raise KovacecError("entries must be homogeneous of one common degree")
    return degs.pop()


def kovacec_decompose(L: PolyMatrix) -> PolyMatrix:
    """Symmetric N with M3 N M3 = L."""
    ring = L.ring
    if L.shape != (3, 3):
        raise KovacecError("L must be 3x3")
    if not L.is_symmetric():
        raise KovacecError("L is not symmetric")
    if any(not v.is_zero() for v in L.apply(xbar(ring))):
        raise KovacecError("L does not annihilate (x0, x1, x2)")
    d = _common_degree(L)
    if d is None:
        return PolyMatrix.zeros(ring, 3)
    if d < 2:
        raise KovacecError("a nonzero annihilator has degree at least 2")
    M = koszul_matrix(ring)
    P = _solve_right_factor(L, M, d - 1, ring)
    Pt = P.T
    v = Pt.apply(xbar(ring))
    lam = exact_divide(v[0], ring.var("x0"))
    for i in range(3):
        if v[i] != lam * ring.var(X[i]):
            raise KovacecError("P^t x is not a multiple of x")
    rhs = Pt - PolyMatrix.identity(ring, 3) * lam
    Q = _solve_right_factor(rhs, M, d - 2, ring)
    half = ring.field.one / 2
    N = (Q + Q.T) * (-half)
    if M @ N @ M != L:
        raise AssertionError("decomposition failed to reproduce L")
    return N


@dataclass(frozen=True)
class HomFamily:
    dimension: int
    degree: int
    parameters: tuple | None   # upper-triangular symbolic matrix d1..d6, or None

    def __int__(self):
        return self.dimension


def hom_family_dimension(m1: int, m2: int) -> HomFamily:
    """Size of the family N of symmetric matrices of forms of degree 2*m1 - m2 + 2."""
    if m1 < 0:
        raise ValueError("m1 must be nonnegative")
    deg = 2 * m1 - m2 + 2
    forms = comb(deg + 2, 2) if deg >= 0 else 0
    dim = 6 * forms
    params = (("d1", "d2", "d3"), ("d2", "d4", "d5"), ("d3", "d5", "d6")) if dim else None
    return HomFamily(dim, deg, params)
