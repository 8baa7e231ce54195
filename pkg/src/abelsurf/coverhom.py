"""Cover homomorphisms Sym^2 Omega^1(-m) -> Omega^1(-m) on the plane.

A homomorphism is stored globally as three symmetric matrices C_i with
Phi(y_a y_b) = sum_i C_i[a, b] y_i, or locally (m = 0) through its ten
beta coefficients.  On the chart {x_k != 0} with surviving basis y_a, y_b
(a < b) a trace-free homomorphism has the shape

    y_a^2   = c1 y_a + c0 y_b
    y_a y_b = -c2 y_a - c1 y_b
    y_b^2   = c3 y_a + c2 y_b

and the full rank-3 algebra adds Miranda's constants.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .ambient import BASE, build_euler_ring, transition, trivialize
from .exactring import FieldSpec, MultiPoly, PolyMatrix, PolyRing, exact_divide
from .koszul import koszul_matrix
from .linalg import solve

__all__ = [
    "BETA_NAMES", "BetaVector", "CoverHomSpec", "LocalCover", "base_ring",
    "triple_cover_coefficients", "global_from_betas", "betas_from_global",
    "annihilation_normalize", "trace_free_normalize", "apply_y_shift",
    "local_equations", "chart_consistency_check", "chart_from_triple",
    "transport_local", "miranda_constants", "CheckResult", "triple_from_global", "traces",
]

BETA_NAMES = ("b0", "b1", "b2", "b01", "b02", "b10", "b12", "b20", "b21", "b012")
CHART_BASIS = {"x0": (1, 2), "x1": (0, 2), "x2": (0, 1)}


def base_ring(fld: FieldSpec, params=(), inverted: str | None = None) -> PolyRing:
    return PolyRing(fld, list(BASE) + list(params), inverted=inverted)


@dataclass(frozen=True)
class BetaVector:
    b0: object = 0
    b1: object = 0
    b2: object = 0
    b01: object = 0
    b02: object = 0
    b10: object = 0
    b12: object = 0
    b20: object = 0
    b21: object = 0
    b012: object = 0

    @classmethod
    def from_list(cls, values) -> "BetaVector":
        return cls(*values)

    @classmethod
    def symbolic(cls, ring: PolyRing, prefix: str = "") -> "BetaVector":
        return cls(*(ring.var(prefix + n) for n in BETA_NAMES))

    @classmethod
    def from_json(cls, obj: dict, fld: FieldSpec) -> "BetaVector":
        unknown = set(obj) - set(BETA_NAMES)
        if unknown:
            raise ValueError("unknown beta keys %s" % sorted(unknown))
        return cls(**{k: fld.from_text(str(obj.get(k, 0))) for k in BETA_NAMES})

    def to_json(self) -> dict:
        return {k: str(getattr(self, k)) for k in BETA_NAMES}

    def values(self) -> list:
        return [getattr(self, k) for k in BETA_NAMES]

    def in_ring(self, ring: PolyRing) -> list:
        return [v.to_ring(ring) if isinstance(v, MultiPoly) else ring.const(v) for v in self.values()]

    def is_zero(self) -> bool:
        return all(not v for v in self.values())


def triple_cover_coefficients(beta: BetaVector, ring: PolyRing) -> tuple:
    """c0..c3 on {x2 != 0} as functions of the ten beta coefficients."""
    if ring.inverted != "x2":
        raise ValueError("the beta form lives on the chart x2 != 0")
    B = dict(zip(BETA_NAMES, beta.in_ring(ring)))
    x0, x1, x2 = (ring.var(v) for v in BASE)
    inv = x2 ** -1
    third = Fraction(1, 3)
    c0 = B["b1"] * x2**2 - B["b12"] * x1 * x2 + B["b21"] * x1**2 - B["b2"] * x1**3 * inv
    c1 = (B["b10"] * x2**2 * third - B["b012"] * x1 * x2 * (2 * third) + B["b20"] * x1**2 * third
          - B["b12"] * x0 * x2 * third + B["b21"] * x0 * x1 * (2 * third) - B["b2"] * x0 * x1**2 * inv)
    c2 = (B["b01"] * x2**2 * third - B["b02"] * x1 * x2 * third - B["b012"] * x0 * x2 * (2 * third)
          + B["b20"] * x0 * x1 * (2 * third) + B["b21"] * x0**2 * third - B["b2"] * x0**2 * x1 * inv)
    c3 = B["b0"] * x2**2 - B["b02"] * x0 * x2 + B["b20"] * x0**2 - B["b2"] * x0**3 * inv
    return c0, c1, c2, c3


# ---------------------------------------------------------------------------
# global form

# position of the six upper-triangular entries c_{i1..i6} of N_i
_ENTRY = {1: (0, 0), 2: (0, 1), 3: (0, 2), 4: (1, 1), 5: (1, 2), 6: (2, 2)}
# canonical preimage: beta name -> ((i, j), weight) choosing one entry per beta
_PREIMAGE = {
    "b0": ((0, 1), 1), "b1": ((1, 4), 1), "b2": ((2, 6), 1),
    "b01": ((0, 2), Fraction(1, 2)), "b02": ((0, 3), Fraction(1, 2)), "b10": ((0, 4), 1),
    "b12": ((1, 5), Fraction(1, 2)), "b20": ((0, 6), 1), "b21": ((1, 6), 1), "b012": ((0, 5), 1),
}
# the linear combinations of entries read off by each beta
_TABLE = {
    "b0": [((0, 1), 1)], "b1": [((1, 4), 1)], "b2": [((2, 6), 1)],
    "b01": [((0, 2), 2), ((1, 1), 1)], "b02": [((0, 3), 2), ((2, 1), 1)],
    "b10": [((0, 4), 1), ((1, 2), 2)], "b12": [((1, 5), 2), ((2, 4), 1)],
    "b20": [((0, 6), 1), ((2, 3), 2)], "b21": [((1, 6), 1), ((2, 5), 2)],
    "b012": [((0, 5), 1), ((1, 3), 1), ((2, 2), 1)],
}


def _entry(N, i, j):
    r, c = _ENTRY[j]
    return N[i][r, c]


def global_from_betas(beta: BetaVector, ring: PolyRing) -> tuple:
    """Symmetric N_0, N_1, N_2 (m = 0) whose homomorphism has these betas.

    With C_i = M3 N_i M3, the beta table applied to -N reproduces the local
    equations on {x2 != 0}, hence the sign.
    """
    vals = dict(zip(BETA_NAMES, beta.in_ring(ring)))
    ent = [[[ring.zero() for _ in range(3)] for _ in range(3)] for _ in range(3)]
    for name, ((i, j), w) in _PREIMAGE.items():
        r, c = _ENTRY[j]
        v = vals[name] * (-w)
        ent[i][r][c] = ent[i][r][c] + v
        if r != c:
            ent[i][c][r] = ent[i][c][r] + v
    return tuple(PolyMatrix(ring, e) for e in ent)


def betas_from_global(N: tuple) -> BetaVector:
    out = {}
    for name, combo in _TABLE.items():
        s = N[0].ring.zero()
        for (i, j), w in combo:
            s = s - _entry(N, i, j) * w
        out[name] = s.constant_value() if s.is_constant() else s
    return BetaVector(**out)


def triple_from_global(N: tuple) -> tuple:
    M = koszul_matrix(N[0].ring)
    return tuple(M @ n @ M for n in N)


@dataclass(frozen=True)
class CoverHomSpec:
    field: FieldSpec
    m: int = 0
    N: tuple | None = None
    betas: BetaVector | None = None

    def __post_init__(self):
        if self.N is None and self.betas is None:
            raise ValueError("need global matrices or betas")
        if self.N is not None:
            for C in triple_from_global(self.N):
                if any(not v.is_zero() for v in C.apply([C.ring.var(x) for x in BASE])):
                    raise ValueError("C_i does not annihilate x")

    def global_matrices(self, params=()) -> tuple:
        if self.N is not None:
            return self.N
        ring = base_ring(self.field, params)
        return global_from_betas(self.betas, ring)


# ---------------------------------------------------------------------------
# normalisations


@dataclass(frozen=True)
class NormalizedTriple:
    C: tuple                  # the new triple
    shift: tuple              # u: the new basis is y_i - u_i
    im_part: PolyMatrix       # the matrix C removed as x_i * C
    notes: dict = field(default_factory=dict, compare=False)


def apply_y_shift(C: tuple, u) -> tuple:
    """Structure matrices after passing to the basis y_i - u_i."""
    ring = C[0].ring
    out = []
    for i in range(3):
        rows = [[C[i][a, b] - (u[a] if b == i else ring.zero()) - (u[b] if a == i else ring.zero())
                 for b in range(3)] for a in range(3)]
        out.append(PolyMatrix(ring, rows))
    return tuple(out)


def _split_params(ring: PolyRing, polys: list) -> dict:
    """Group terms by their exponents in the non-base variables."""
    xs = {ring.index[x] for x in BASE}
    groups: dict = {}
    for k, p in enumerate(polys):
        for e, c in p.terms.items():
            key = tuple(0 if i in xs else a for i, a in enumerate(e))
            xe = tuple(a if i in xs else 0 for i, a in enumerate(e))
            groups.setdefault(key, [dict() for _ in polys])[k][xe] = c
    return {key: [MultiPoly(ring, t) for t in ts] for key, ts in groups.items()}


def _sym_times_x(ring: PolyRing, r: list, deg: int):
    """A symmetric matrix S of degree-``deg`` forms with S x = r, or None.

    Parameters are treated as constants: each parameter monomial is solved
    for separately.
    """
    from .koszul import monomials_of_degree

    fld = ring.field
    mons = monomials_of_degree(ring, deg)
    slots = [(a, b) for a in range(3) for b in range(a, 3)]
    unknowns = [(s, mon) for s in slots for mon in mons]
    xs = [ring.var(x) for x in BASE]
    images = []
    for (a, b), mon in unknowns:
        mono = MultiPoly(ring, {mon: fld.one})
        col = [ring.zero()] * 3
        col[a] = col[a] + mono * xs[b]
        if a != b:
            col[b] = col[b] + mono * xs[a]
        images.append(col)
    ent = [[ring.zero()] * 3 for _ in range(3)]
    for key, part in _split_params(ring, r).items():
        keys = sorted({(k, e) for im in images for k in range(3) for e in im[k].terms}
                      | {(k, e) for k in range(3) for e in part[k].terms})
        rows = [[im[k].terms.get(e, fld.zero) for im in images] for k, e in keys]
        rhs = [part[k].terms.get(e, fld.zero) for k, e in keys]
        sol = solve(rows, rhs, len(unknowns), fld.zero)
        if sol is None:
            return None
        pm = MultiPoly(ring, {key: fld.one})
        for ((a, b), mon), v in zip(unknowns, sol):
            if v:
                t = MultiPoly(ring, {mon: v}) * pm
                ent[a][b] = ent[a][b] + t
                if a != b:
                    ent[b][a] = ent[b][a] + t
    return PolyMatrix(ring, ent)


def _quadric_as_sym(ring: PolyRing, f: MultiPoly) -> PolyMatrix:
    """Some symmetric S with x^t S x = f (f of degree >= 2 in x)."""
    xs_idx = [ring.index[x] for x in BASE]
    ent = [[ring.zero()] * 3 for _ in range(3)]
    half = ring.field.one / 2
    for e, c in f.terms.items():
        i = next(k for k in range(3) if e[xs_idx[k]] > 0)
        e2 = list(e)
        e2[xs_idx[i]] -= 1
        j = next(k for k in range(3) if e2[xs_idx[k]] > 0)
        e2[xs_idx[j]] -= 1
        t = MultiPoly(ring, {tuple(e2): c})
        if i == j:
            ent[i][i] = ent[i][i] + t
        else:
            ent[i][j] = ent[i][j] + t * half
            ent[j][i] = ent[j][i] + t * half
    return PolyMatrix(ring, ent)


def _degree(C: tuple):
    for M in C:
        for r in M.rows:
            for e in r:
                if e.terms:
                    ex = next(iter(e.terms))
                    return sum(ex[e.ring.index[x]] for x in BASE)
    return None


def annihilation_normalize(Cp: tuple) -> NormalizedTriple:
    """Rewrite a triple so that every C_i annihilates x.

    The input must satisfy (x2 C'_i - x_i C'_2) x = 0, so that C'_i x = x_i r
    for one vector r.  We look for a symmetric C and a shift u with
    C x + u = r and sum x_i u_i = 0; then C_i = C'_i - x_i C - (u e_i^t + e_i u^t)
    annihilates x.  u = 0 whenever r = C x is solvable, which is always the
    case for m = 0.
    """
    ring = Cp[0].ring
    xs = [ring.var(x) for x in BASE]
    vecs = [M.apply(xs) for M in Cp]
    try:
        r = [exact_divide(vecs[2][k], xs[2]) for k in range(3)]
    except ArithmeticError:
        raise ValueError("triple does not satisfy the chart relation") from None
    for i in range(3):
        if any(vecs[i][k] != xs[i] * r[k] for k in range(3)):
            raise ValueError("triple does not satisfy the chart relation")
    zero3 = [ring.zero()] * 3
    if all(v.is_zero() for v in r):
        return NormalizedTriple(tuple(Cp), tuple(zero3), PolyMatrix.zeros(ring, 3))
    d = _degree(Cp)
    C = _sym_times_x(ring, r, d - 1)
    if C is None:
        f = sum((xs[k] * r[k] for k in range(3)), ring.zero())
        C = _quadric_as_sym(ring, f)
    Cx = C.apply(xs)
    u = [r[k] - Cx[k] for k in range(3)]
    assert sum((xs[k] * u[k] for k in range(3)), ring.zero()).is_zero()
    shifted = apply_y_shift(tuple(Cp), u)
    out = tuple(shifted[i] - C * xs[i] for i in range(3))
    for M in out:
        assert all(v.is_zero() for v in M.apply(xs))
    return NormalizedTriple(out, tuple(u), C)


def _chart_traces(C: tuple, k: int) -> dict:
    """Traces of multiplication by y_i (i != k) on the chart {x_k != 0}."""
    ring = C[0].ring.with_inverted(BASE[k])
    Cl = [M.map(lambda p: p.to_ring(ring)) for M in C]
    xk_inv = ring.var(BASE[k]) ** -1
    hat = {c: Cl[c] - Cl[k] * (ring.var(BASE[c]) * xk_inv) for c in range(3) if c != k}
    out = {}
    for i in hat:
        out[i] = sum((hat[c][i, c] for c in hat), ring.zero())
    return out


def traces(C: tuple) -> tuple:
    """Globally assembled v_i = tr(y_i), each checked on two charts."""
    ring = C[0].ring
    v = []
    for i in range(3):
        vals = []
        for k in range(3):
            if k == i:
                continue
            t = _chart_traces(C, k)[i]
            if t.cleared()[0]:
                raise ValueError("trace of y_%d is not regular" % i)
            vals.append(t.to_ring(ring))
        if vals[0] != vals[1]:
            raise ValueError("trace of y_%d depends on the chart" % i)
        v.append(vals[0])
    return tuple(v)


def trace_free_normalize(C: tuple) -> NormalizedTriple:
    """Shift y_i to y_i - v_i/3 so that every chart basis is trace free.

    The result again annihilates x: the shift is followed by removing the
    x_i * S part it introduces.
    """
    ring = C[0].ring
    xs = [ring.var(x) for x in BASE]
    for M in C:
        if any(not v.is_zero() for v in M.apply(xs)):
            raise ValueError("triple must annihilate x")
    v = traces(C)
    notes = {
        "closed_formula": all(v[i] == sum((C[j][i, j] for j in range(3)), ring.zero()) for i in range(3)),
        "shifted_formula": all(v[i] == sum((C[j][i, (i + j) % 3] for j in range(3)), ring.zero())
                               for i in range(3)),
    }
    if not sum((xs[i] * v[i] for i in range(3)), ring.zero()).is_zero():
        raise ValueError("sum x_i v_i does not vanish")
    third = ring.field.one / 3
    u = [vi * third for vi in v]
    if all(ui.is_zero() for ui in u):
        return NormalizedTriple(tuple(C), tuple(u), PolyMatrix.zeros(ring, 3), notes)
    shifted = apply_y_shift(tuple(C), u)
    again = annihilation_normalize(shifted)
    if any(not w.is_zero() for w in again.shift):
        raise AssertionError("re-annihilation needed a second shift")
    return NormalizedTriple(again.C, tuple(u), again.im_part, notes)


# ---------------------------------------------------------------------------
# local equations


def miranda_constants(c0, c1, c2, c3) -> tuple:
    """Constant terms (K_aa, K_ab, K_bb) completing the local algebra.

    With (a, b, c, d) = (c1, c0, c3, c2): 2(a^2 - bd), -(ad - bc), 2(d^2 - ac).
    """
    a, b, c, d = c1, c0, c3, c2
    return 2 * (a * a - b * d), -(a * d - b * c), 2 * (d * d - a * c)


@dataclass(frozen=True)
class LocalCover:
    """The rank-3 algebra on one chart: basis 1, y_a, y_b."""

    inverted: str
    c: tuple               # (c0, c1, c2, c3) in a ring with ``inverted`` a unit

    @property
    def basis(self) -> tuple:
        a, b = CHART_BASIS[self.inverted]
        return f"y{a}", f"y{b}"

    @property
    def ring(self) -> PolyRing:
        return self.c[0].ring

    def structure(self) -> dict:
        """Products of basis elements as (const, coeff of y_a, coeff of y_b)."""
        c0, c1, c2, c3 = self.c
        kaa, kab, kbb = miranda_constants(c0, c1, c2, c3)
        return {("a", "a"): (kaa, c1, c0), ("a", "b"): (kab, -c2, -c1), ("b", "b"): (kbb, c3, c2)}

    def multiply(self, u: tuple, v: tuple) -> tuple:
        """Product of u0 + u1 y_a + u2 y_b and v0 + v1 y_a + v2 y_b."""
        s = self.structure()
        out = [u[0] * v[0], u[0] * v[1] + u[1] * v[0], u[0] * v[2] + u[2] * v[0]]
        for (p, q), key in (((1, 1), ("a", "a")), ((1, 2), ("a", "b")), ((2, 1), ("a", "b")), ((2, 2), ("b", "b"))):
            f = u[p] * v[q]
            if f.terms:
                for k in range(3):
                    out[k] = out[k] + f * s[key][k]
        return tuple(out)

    def is_associative(self) -> bool:
        ring = self.ring
        o, z = ring.one(), ring.zero()
        e = [(o, z, z), (z, o, z), (z, z, o)]
        for i in range(1, 3):
            for j in range(1, 3):
                for k in range(1, 3):
                    if self.multiply(self.multiply(e[i], e[j]), e[k]) != self.multiply(e[i], self.multiply(e[j], e[k])):
                        return False
        return True

    def relations(self, ring: PolyRing) -> list:
        """The three local equations as polynomials (linear parts only)."""
        a, b = (ring.var(n) for n in self.basis)
        c0, c1, c2, c3 = (c.to_ring(ring) for c in self.c)
        return [a * a - c1 * a - c0 * b, a * b + c2 * a + c1 * b, b * b - c3 * a - c2 * b]


def chart_from_triple(C: tuple, inverted: str) -> LocalCover:
    """Read c0..c3 on a chart from an annihilating, trace-free triple."""
    k = BASE.index(inverted)
    a, b = CHART_BASIS[inverted]
    ring = C[0].ring.with_inverted(inverted)
    Cl = [M.map(lambda p: p.to_ring(ring)) for M in C]
    xk_inv = ring.var(inverted) ** -1
    hat = {c: Cl[c] - Cl[k] * (ring.var(BASE[c]) * xk_inv) for c in (a, b)}
    c1, c0 = hat[a][a, a], hat[b][a, a]
    c2, c3 = hat[b][b, b], hat[a][b, b]
    if hat[a][a, b] != -c2 or hat[b][a, b] != -c1:
        raise ValueError("triple is not trace free on the chart %s" % inverted)
    return LocalCover(inverted, (c0, c1, c2, c3))


def _local_from_spec(spec: CoverHomSpec, inverted: str, params=()) -> LocalCover:
    if spec.betas is not None and spec.N is None and inverted == "x2":
        ring = base_ring(spec.field, params, "x2")
        return LocalCover("x2", triple_cover_coefficients(spec.betas, ring))
    C = triple_from_global(spec.global_matrices(params))
    C = trace_free_normalize(annihilation_normalize(C).C).C
    return chart_from_triple(C, inverted)


def transport_local(lc: LocalCover, target: str) -> LocalCover:
    """Carry the chart algebra to another chart through the Euler transitions."""
    if target == lc.inverted:
        return lc
    src_ring = lc.ring
    params = [v for v in src_ring.variables if v not in BASE]
    pres = build_euler_ring(0, 1, src_ring.field)
    A, B = trivialize(pres, lc.inverted), trivialize(pres, target)
    to_b = transition(pres, A, B).mapping     # target basis written on the source chart
    to_a = transition(pres, B, A).mapping     # source basis written on the target chart
    ra = base_ring(src_ring.field, params, lc.inverted)
    rb = base_ring(src_ring.field, params, target)
    sa, sb = lc.basis, LocalCover(target, lc.c).basis

    def lin(p: MultiPoly, basis, ring) -> list:
        parts = p.coefficients_in(basis)
        return [parts[key].to_ring(ring) if key in parts else ring.zero() for key in ((1, 0), (0, 1))]

    tb = [lin(to_b[n], sa, ra) for n in sb]        # y_target_k = sum_p tb[k][p] * y_source_p
    ua = [lin(to_a[n], sb, rb) for n in sa]        # y_source_p = sum_m ua[p][m] * y_target_m
    z = ra.zero()
    xa = lc.inverted
    prods = {}
    for k in range(2):
        for l in range(k, 2):
            u = (z, tb[k][0], tb[k][1])
            v = (z, tb[l][0], tb[l][1])
            res = lc.multiply(u, v)
            # clear the source denominator, move to the target chart, divide back
            N = max(res[1 + p].cleared()[0] for p in range(2))
            moved = [res[1 + p].shift(xa, N).to_ring(rb) for p in range(2)]
            coeffs = []
            for m in range(2):
                s = moved[0] * ua[0][m] + moved[1] * ua[1][m]
                coeffs.append(exact_divide(s, rb.var(xa) ** N) if N else s)
            prods[(k, l)] = coeffs
    c1, c0 = prods[(0, 0)]
    mc2, mc1 = prods[(0, 1)]
    c3, c2 = prods[(1, 1)]
    if mc2 != -c2 or mc1 != -c1:
        raise AssertionError("transported algebra lost trace freeness")
    return LocalCover(target, (c0, c1, c2, c3))


def local_equations(spec: CoverHomSpec, chart: str = "u2", params=()) -> LocalCover:
    """c0..c3 on the chart ``u0``, ``u1`` or ``u2``.

    With betas the U2 coefficients are the beta formulas and the other charts
    are obtained by transition; with global matrices every chart is read
    directly from the normalised triple.
    """
    inv = "x" + chart[-1]
    if spec.N is None:
        base = _local_from_spec(spec, "x2", params)
        return transport_local(base, inv)
    return _local_from_spec(spec, inv, params)


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    witness: str = ""

    def __bool__(self):
        return self.ok


def chart_consistency_check(spec: CoverHomSpec, locals_: dict | None = None, params=()) -> CheckResult:
    """Compare each chart's equations with the U2 equations carried over by transition.

    ``locals_`` may supply chart equations (for example hand-edited ones);
    by default they are read off the normalised global triple.
    """
    if locals_ is None:
        C = triple_from_global(spec.global_matrices(params))
        C = trace_free_normalize(annihilation_normalize(C).C).C
        locals_ = {x: chart_from_triple(C, x) for x in BASE}
    base = locals_["x2"]
    for x in ("x1", "x0"):
        moved = transport_local(base, x)
        for i, (a, b) in enumerate(zip(moved.c, locals_[x].c)):
            b = b.to_ring(a.ring)
            if a != b:
                return CheckResult(False, "chart u%s: c%d is %s, transition gives %s" % (x[1], i, b, a))
    return CheckResult(True)
