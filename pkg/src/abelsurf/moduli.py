"""Normal forms and invariants for the parameters (alpha, beta).

A linear change of the two fiber copies, (y_i, z_i) -> (y_i, z_i) g, acts on
alpha and on beta as on binary cubics

    F_c(u, v) = c0 u^3 + 3 c1 u^2 v + 3 c2 u v^2 + c3 v^3,

namely F_c -> F_c(A (u, v)) / det(A)^2 with A = [[g22, g12], [g21, g11]].
Sending the three roots of F_beta to 0, infinity and -1 gives beta = (0, 1, 1, 0);
what is left is an S3 acting on (alpha0, alpha1, alpha3).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

from .exactring import FieldSpec, Fp, PolyRing, QW
from .linalg import nullspace

__all__ = [
    "three_points", "distinctness", "normalize_beta", "s3_act", "delta_coords", "moduli_invariants",
    "orbit_equivalent", "is_bielliptic_locus", "ModuliPoint", "moduli_point", "IrrationalPointsError",
    "DegenerateError", "transform_cubic", "apply_change", "S3_WORDS", "S3_TABLE", "matrix_action",
    "standard_action_certificate", "table_from_matrices", "S_MATRIX", "R_MATRIX",
]

S_MATRIX = ((0, 1), (-1, -1))
R_MATRIX = ((0, 1), (1, 0))
S3_WORDS = ("", "s", "ss", "r", "rs", "rss")


class IrrationalPointsError(ValueError):
    pass


class DegenerateError(ValueError):
    pass


def distinctness(alpha):
    """The quartic whose nonvanishing makes the three points distinct."""
    a0, a1, a2, a3 = alpha
    return (a0 * a0 * a3 * a3 + 4 * a0 * a2 ** 3 - 3 * a1 * a1 * a2 * a2 + 4 * a1 ** 3 * a3
            - 6 * a0 * a1 * a2 * a3)


def _field_of(x, fld):
    if fld is not None:
        return fld
    if isinstance(x, Fp):
        return FieldSpec.prime(x.p)
    if isinstance(x, QW):
        return FieldSpec.rationals_omega()
    return FieldSpec.rationals()


def _roots(coeffs: list, fld: FieldSpec) -> list:
    """Roots in the field of sum coeffs[i] t^i (with multiplicity)."""
    while coeffs and not coeffs[-1]:
        coeffs = coeffs[:-1]
    if len(coeffs) <= 1:
        return []
    if fld.kind == "FP":
        if fld.modulus > 10 ** 6:
            raise IrrationalPointsError("root search is limited to primes below 10^6")
        cand = (fld(v) for v in range(fld.modulus))
    elif fld.kind == "Q":
        cand = _rational_candidates([Fraction(c) for c in coeffs])
    else:
        raise IrrationalPointsError("root finding over Q(w) is not supported")
    out = []
    poly = list(coeffs)
    for r in cand:
        while len(poly) > 1 and not _horner(poly, r):
            out.append(r)
            poly = _deflate(poly, r)
    return out


def _horner(p, r):
    acc = p[-1] * 0
    for c in reversed(p):
        acc = acc * r + c
    return acc


def _deflate(p, r):
    n = len(p) - 1
    q = [p[-1] * 0] * n
    acc = p[-1] * 0
    for i in range(n, 0, -1):
        acc = acc * r + p[i]
        q[i - 1] = acc
    return q


def _rational_candidates(coeffs):
    from math import lcm

    den = lcm(*(c.denominator for c in coeffs))
    ints = [int(c * den) for c in coeffs]
    lo = next(i for i, c in enumerate(ints) if c)
    ints = ints[lo:]
    cands = [Fraction(0)] if lo else []

    def divisors(n):
        n = abs(n)
        out = set()
        d = 1
        while d * d <= n:
            if n % d == 0:
                out |= {d, n // d}
            d += 1
        return out

    for p_ in divisors(ints[0]):
        for q_ in divisors(ints[-1]):
            cands += [Fraction(p_, q_), Fraction(-p_, q_)]
    return sorted(set(cands))


def three_points(alpha, fld: FieldSpec | None = None) -> list:
    """The three points of the rank-3 algebra with structure constants alpha.

    y^2 = a1 y + a0 z + 2(a1^2 - a0 a2), yz = -a2 y - a1 z - (a1 a2 - a0 a3),
    z^2 = a3 y + a2 z + 2(a2^2 - a1 a3).
    """
    fld = _field_of(alpha[0], fld)
    a0, a1, a2, a3 = (fld(a) for a in alpha)
    if not distinctness((a0, a1, a2, a3)):
        raise DegenerateError("the three points are not distinct")
    k_yy = 2 * (a1 * a1 - a0 * a2)
    k_yz = -(a1 * a2 - a0 * a3)
    k_zz = 2 * (a2 * a2 - a1 * a3)
    z0 = fld.zero
    # rows: coordinates (1, y, z) of the product; columns: basis element multiplied
    My = [[z0, k_yy, k_yz], [fld.one, a1, -a2], [z0, a0, -a1]]
    Mz = [[z0, k_yz, k_zz], [z0, -a2, a3], [fld.one, -a1, a2]]
    for t in range(0, 50):
        tt = fld(t)
        L = [[My[i][j] + tt * Mz[i][j] for j in range(3)] for i in range(3)]
        cp = _charpoly3(L, fld)
        roots = _roots(cp, fld)
        if len(roots) < 3:
            raise IrrationalPointsError("the points are not rational over %s" % fld.label)
        if len(set(roots)) == 3:
            pts = []
            for lam in roots:
                # left eigenvector phi with phi L = lam phi, phi(1) = 1
                rows = [[L[j][i] - (lam if i == j else z0) for j in range(3)] for i in range(3)]
                (phi,) = nullspace(rows, 3, fld.zero, fld.one)
                phi = [v / phi[0] for v in phi]
                pts.append((phi[1], phi[2]))
            return pts
    raise DegenerateError("no separating linear form found")


def _charpoly3(L, fld) -> list:
    """Coefficients (increasing degree) of det(t I - L)."""
    tr = L[0][0] + L[1][1] + L[2][2]
    m2 = sum((L[i][i] * L[j][j] - L[i][j] * L[j][i] for i in range(3) for j in range(i + 1, 3)), fld.zero)
    d = (L[0][0] * (L[1][1] * L[2][2] - L[1][2] * L[2][1]) - L[0][1] * (L[1][0] * L[2][2] - L[1][2] * L[2][0])
         + L[0][2] * (L[1][0] * L[2][1] - L[1][1] * L[2][0]))
    return [-d, m2, -tr, fld.one]


# ---------------------------------------------------------------------------
# GL2 on binary cubics


def transform_cubic(c, A, fld: FieldSpec) -> tuple:
    """Coefficients of F_c(A (u, v)) / det(A)^2."""
    ring = PolyRing(fld, ["u", "v"])
    u, v = ring.var("u"), ring.var("v")
    A = [[fld(x) for x in row] for row in A]
    d = A[0][0] * A[1][1] - A[0][1] * A[1][0]
    if not d:
        raise ValueError("singular matrix")
    uu = u * A[0][0] + v * A[0][1]
    vv = u * A[1][0] + v * A[1][1]
    c = [fld(x) for x in c]
    F = c[0] * uu ** 3 + 3 * c[1] * uu * uu * vv + 3 * c[2] * uu * vv * vv + c[3] * vv ** 3
    F = F * (fld.one / (d * d))
    co = [F.coefficient({"u": 3 - k, "v": k}) for k in range(4)]
    return (co[0], co[1] / 3, co[2] / 3, co[3])


def _a_from_g(g) -> list:
    return [[g[1][1], g[0][1]], [g[1][0], g[0][0]]]


def _g_from_a(A) -> tuple:
    return ((A[1][1], A[0][1]), (A[1][0], A[0][0]))


def apply_change(params, g):
    """Parameters of the surface after (y_i, z_i) -> (y_i, z_i) g."""
    from .abelian13 import SurfaceParams

    fld = params.field
    A = _a_from_g([[fld(x) for x in row] for row in g])
    return SurfaceParams(fld, transform_cubic(params.alpha, A, fld), transform_cubic(params.beta, A, fld))


def _projective_roots(c, fld) -> list:
    """Roots of F_c on P^1 as vectors (u, v)."""
    roots = [(r, fld.one) for r in _roots([c[3], 3 * c[2], 3 * c[1], c[0]], fld)]
    if not c[0]:
        roots.append((fld.one, fld.zero))
    return roots


def normalize_beta(params):
    """(g, params') with params' = apply_change(params, g) and beta' = (0, 1, 1, 0)."""
    fld = params.field
    beta = params.beta
    if not distinctness(beta):
        raise DegenerateError("the beta configuration is degenerate")
    target = tuple(fld(x) for x in (0, 1, 1, 0))
    if tuple(beta) == target:
        one, zero = fld.one, fld.zero
        return ((one, zero), (zero, one)), params
    roots = _projective_roots(beta, fld)
    if len(roots) != 3:
        raise IrrationalPointsError("the roots of the beta cubic are not rational")
    r1, r2, r3 = roots
    # l1 r1 - l2 r2 = r3
    det12 = r1[0] * (-r2[1]) - (-r2[0]) * r1[1]
    l1 = (r3[0] * (-r2[1]) - (-r2[0]) * r3[1]) / det12
    l2 = (r1[0] * r3[1] - r3[0] * r1[1]) / det12
    A = [[l1 * r1[0], l2 * r2[0]], [l1 * r1[1], l2 * r2[1]]]
    # F(A(u,v)) / det^2 = kappa * 3uv(u+v); rescaling A by t multiplies it by 1/t
    kappa = transform_cubic(beta, A, fld)[1]
    A = [[x * kappa for x in row] for row in A]
    g = _g_from_a(A)
    new = apply_change(params, g)
    if tuple(new.beta) != target:
        raise AssertionError("normalisation failed")
    return g, new


# ---------------------------------------------------------------------------
# the residual S3


S3_TABLE = {
    "s": lambda a0, a1, a3: (-a0 + a3, -a0 + a1, -a0),
    "ss": lambda a0, a1, a3: (-a3, a1 - a3, a0 - a3),
    "r": lambda a0, a1, a3: (a3, a1, a0),
    "rs": lambda a0, a1, a3: (a0 - a3, a1 - a3, -a3),
    "rss": lambda a0, a1, a3: (-a0, -a0 + a1, -a0 + a3),
}


def s3_act(word: str, alpha3) -> tuple:
    """Apply a word in s, r; letters act left to right."""
    a = tuple(alpha3)
    for ch in word.replace("s^2", "ss").replace("s2", "ss"):
        if ch not in "sr":
            raise ValueError("words use the letters s and r")
        a = S3_TABLE[ch](*a)
    return a


def matrix_action(word: str, alpha3, fld: FieldSpec) -> tuple:
    """The same action computed from the 2x2 matrices S_MATRIX and R_MATRIX.

    Each letter m changes the fiber basis by g = m^t; on the normalised
    family beta = (0, 1, 1, 0) is fixed and alpha moves as a binary cubic.
    """
    a0, a1, a3 = (fld(x) for x in alpha3)
    alpha = (a0, a1, a1, a3)
    for ch in word:
        m = S_MATRIX if ch == "s" else R_MATRIX
        g = [[fld(m[j][i]) for j in range(2)] for i in range(2)]
        A = _a_from_g(g)
        beta = transform_cubic((0, 1, 1, 0), A, fld)
        if beta != tuple(fld(x) for x in (0, 1, 1, 0)):
            raise AssertionError("matrix %s does not fix beta" % ch)
        alpha = transform_cubic(alpha, A, fld)
    return alpha[0], alpha[1], alpha[3]


def table_from_matrices(fld: FieldSpec | None = None) -> bool:
    """Check the five table rows against the matrix computation."""
    fld = fld or FieldSpec.rationals()
    # the action is linear, so basis vectors suffice
    basis = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    for word in ("s", "ss", "r", "rs", "rss"):
        for e in basis:
            if tuple(fld(x) for x in s3_act(word, e)) != matrix_action(word, e, fld):
                return False
    return True


def delta_coords(alpha3) -> tuple:
    a0, a1, a3 = alpha3
    return (a0 + a1 + a3, -3 * a0 + a1 + a3, a0 + a1 - 3 * a3)


def standard_action_certificate(fld: FieldSpec | None = None) -> dict:
    """Symbolic check of s(delta_i) = delta_{i+1} and r(delta_i) = delta_{-i}."""
    fld = fld or FieldSpec.rationals()
    ring = PolyRing(fld, ["a0", "a1", "a3"])
    a = tuple(ring.var(v) for v in ("a0", "a1", "a3"))
    d = delta_coords(a)
    ds = delta_coords(s3_act("s", a))
    dr = delta_coords(s3_act("r", a))
    return {
        "s": all(ds[i] == d[(i + 1) % 3] for i in range(3)),
        "r": all(dr[i] == d[(-i) % 3] for i in range(3)),
        "delta": [str(x) for x in d],
    }


def moduli_invariants(alpha3) -> tuple:
    d0, d1, d2 = delta_coords(alpha3)
    return (d0 + d1 + d2, d0 * d1 + d1 * d2 + d2 * d0, d0 * d1 * d2)


def orbit(alpha3) -> list:
    return [s3_act(w, alpha3) for w in S3_WORDS]


def orbit_equivalent(a, b) -> bool:
    """True iff b is in the S3-orbit of a; invariants are a cross-check."""
    brute = tuple(b) in [tuple(x) for x in orbit(a)]
    inv = moduli_invariants(a) == moduli_invariants(b)
    if brute != inv:
        warnings.warn("invariants and orbit scan disagree; the point has a nontrivial stabiliser "
                      "or lies where the invariants do not separate orbits", RuntimeWarning)
    return brute


def is_bielliptic_locus(alpha3) -> bool:
    return any(not x[1] for x in orbit(alpha3))


@dataclass(frozen=True)
class ModuliPoint:
    alpha3: tuple
    delta: tuple
    invariants: tuple
    bielliptic: bool

    def to_json(self) -> dict:
        return {"alpha3": [str(x) for x in self.alpha3], "delta": [str(x) for x in self.delta],
                "invariants": [str(x) for x in self.invariants], "bielliptic": self.bielliptic}


def moduli_point(alpha3) -> ModuliPoint:
    return ModuliPoint(tuple(alpha3), delta_coords(alpha3), moduli_invariants(alpha3),
                       is_bielliptic_locus(alpha3))

