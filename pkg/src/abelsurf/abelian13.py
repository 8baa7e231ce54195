"""Graded rings of (1,3)-polarised abelian surfaces as degree-6 covers of the plane.

On a chart U_k the ring is the quotient of k[x, x_k^-1, y_a, y_b, z_a, z_b]
by nine generators q - w C - D.  Here w = (y_a, y_b, z_a, z_b), C stacks four
triple-cover blocks built from (alpha_i, beta_i), and D is quadratic in the
block coefficients.
"""

from __future__ import annotations

import json
import random
from fractions import Fraction
from dataclasses import dataclass, field
from functools import partial

from .ambient import BASE, build_euler_ring, trivialize
from .coverhom import (CHART_BASIS, BetaVector, CheckResult, CoverHomSpec,
                       local_equations, triple_cover_coefficients)
from .exactring import FieldSpec, MultiPoly, PolyRing, substitute, weighted_degree
from .heisenberg import GroupAction, QuadraticReducer, act_on_chart, block_matrix_rows
from .linalg import det

__all__ = [
    "SurfaceParams", "GradedIdeal", "FiberAlgebra", "ModuliError", "FlatnessError",
    "moduli_residual", "check_moduli_equation", "block_betas", "c_table", "reference_d_vector",
    "d_vector", "flatness_quadrics", "build_ideal", "build_from_ctable", "check_equivariance",
    "fiber_algebra", "trace_discriminant", "bl_branch_sextic", "bl_params", "branch_on_line",
    "build_irregular_ideal", "irregular_relation", "random_irregular_ctable", "fiber_ring",
    "chart_compatibility",
]


class ModuliError(ValueError):
    pass


class FlatnessError(ArithmeticError):
    pass


def moduli_residual(alpha, beta):
    """alpha0 beta3 / 3 - alpha1 beta2 + alpha2 beta1 - alpha3 beta0 / 3.

    Works for field elements and for polynomials.
    """
    third = _third(alpha[0])
    return (alpha[0] * beta[3] - alpha[3] * beta[0]) * third - alpha[1] * beta[2] + alpha[2] * beta[1]


def _third(x):
    if isinstance(x, MultiPoly):
        return x.ring.field.one / 3
    if isinstance(x, int):
        return Fraction(1, 3)
    return (x * 0 + 1) / 3


@dataclass(frozen=True)
class SurfaceParams:
    field: FieldSpec
    alpha: tuple
    beta: tuple

    def __post_init__(self):
        fld = self.field
        if fld.kind == "FP" and fld.modulus in (2, 3):
            raise ValueError("characteristic 2 and 3 are excluded")
        if len(self.alpha) != 4 or len(self.beta) != 4:
            raise ValueError("alpha and beta have four entries each")
        object.__setattr__(self, "alpha", tuple(fld(a) for a in self.alpha))
        object.__setattr__(self, "beta", tuple(fld(b) for b in self.beta))

    @property
    def residual(self):
        return moduli_residual(self.alpha, self.beta)

    def is_admissible(self) -> bool:
        return not self.residual

    @classmethod
    def random(cls, fld: FieldSpec, rng: random.Random) -> "SurfaceParams":
        """Random point on the moduli hypersurface: alpha2 is solved for."""
        while True:
            a = [fld.random(rng) for _ in range(4)]
            b = [fld.random(rng) for _ in range(4)]
            if b[1]:
                break
        a[2] = fld.zero
        a[2] = -moduli_residual(a, b) / b[1]
        return cls(fld, tuple(a), tuple(b))

    def to_json(self) -> dict:
        return {"field": self.field.label, "alpha": [str(a) for a in self.alpha],
                "beta": [str(b) for b in self.beta]}

    @classmethod
    def from_json(cls, obj: dict) -> "SurfaceParams":
        fld = FieldSpec.parse(obj["field"])
        return cls(fld, tuple(fld.from_text(str(a)) for a in obj["alpha"]),
                   tuple(fld.from_text(str(b)) for b in obj["beta"]))


def check_moduli_equation(alpha, beta):
    """Exact value of the moduli residual; zero means admissible."""
    return moduli_residual(alpha, beta)


def block_betas(alpha_i, beta_i) -> BetaVector:
    """Block coefficients: beta_0 = beta_1 = beta_2, beta_012 = alpha, mixed ones zero."""
    z = beta_i * 0
    return BetaVector(beta_i, beta_i, beta_i, z, z, z, z, z, z, alpha_i)


def fiber_ring(fld: FieldSpec, chart: str = "u2", weights=(1, 2, 2), extra=()) -> PolyRing:
    k = int(chart[-1])
    a, b = CHART_BASIS[f"x{k}"]
    names = list(BASE) + [f"y{a}", f"y{b}", f"z{a}", f"z{b}"] + list(extra)
    w = {v: weights[0] for v in BASE}
    w.update({f"y{a}": weights[1], f"y{b}": weights[1], f"z{a}": weights[2], f"z{b}": weights[2]})
    return PolyRing(fld, names, w, f"x{k}")


def c_table(params: SurfaceParams, chart: str = "u2") -> list:
    """c[i][j] on the chart, one row per block i."""
    fld = params.field
    ring = fiber_ring(fld, chart)
    rows = []
    for i in range(4):
        bv = block_betas(params.alpha[i], params.beta[i])
        if chart == "u2":
            cs = triple_cover_coefficients(bv, ring)
        else:
            spec = CoverHomSpec(fld, 0, None, bv)
            cs = tuple(c.to_ring(ring) for c in local_equations(spec, chart).c)
        rows.append(list(cs))
    return rows


def reference_d_vector(c: list) -> list:
    """The reference constant column in terms of c[i][j] (opposite sign convention)."""
    half = _half(c)
    return [
        -2 * c[1][1] * c[1][1] + 2 * c[1][0] * c[1][2] + 2 * c[0][1] * c[2][1] - c[0][2] * c[2][0] - c[0][0] * c[2][2],
        -c[1][0] * c[1][3] + c[1][1] * c[1][2] - 2 * c[0][2] * c[2][1] + c[0][3] * c[2][0] + c[0][1] * c[2][2],
        2 * c[1][1] * c[1][3] - 2 * c[1][2] * c[1][2] - c[0][3] * c[2][1] - c[0][1] * c[2][3] + 2 * c[0][2] * c[2][2],
        -c[0][1] * c[3][1] + c[0][0] * c[3][2] + c[1][1] * c[2][1] + c[1][2] * c[2][0] - 2 * c[1][0] * c[2][2],
        (-c[0][0] * c[3][3] + c[0][1] * c[3][2] - 5 * c[1][2] * c[2][1] + c[1][3] * c[2][0] + 4 * c[1][1] * c[2][2]) * half,
        c[0][1] * c[3][3] - c[0][2] * c[3][2] + c[1][3] * c[2][1] - 2 * c[1][1] * c[2][3] + c[1][2] * c[2][2],
        2 * c[1][1] * c[3][1] - c[1][2] * c[3][0] - c[1][0] * c[3][2] - 2 * c[2][1] * c[2][1] + 2 * c[2][0] * c[2][2],
        c[1][2] * c[3][1] + c[1][0] * c[3][3] - 2 * c[1][1] * c[3][2] - c[2][0] * c[2][3] + c[2][1] * c[2][2],
        -c[1][3] * c[3][1] - c[1][1] * c[3][3] + 2 * c[1][2] * c[3][2] + 2 * c[2][1] * c[2][3] - 2 * c[2][2] * c[2][2],
    ]


def _half(c):
    x = c[0][0]
    if isinstance(x, MultiPoly):
        return x.ring.field.one / 2
    if isinstance(x, int):
        return Fraction(1, 2)
    return (x * 0 + 1) / 2


def d_vector(c: list) -> list:
    """Constant terms that make the fibers associative: minus the reference column."""
    return [-d for d in reference_d_vector(c)]


def flatness_quadrics(c: list) -> list:
    """Ten quadrics in the c[i][j] cutting out the flat (associative) structures."""
    t, n = _third(c[0][0]), _third(c[0][0]) * _third(c[0][0])
    return [
        -c[2][0] * c[3][3] + 3 * c[2][1] * c[3][2] - 3 * c[2][2] * c[3][1] + c[2][3] * c[3][0],
        -c[1][0] * c[3][3] + 3 * c[1][1] * c[3][2] - 3 * c[1][2] * c[3][1] + c[1][3] * c[3][0],
        (c[0][2] * c[3][3] - c[0][3] * c[3][2]) * t - c[1][2] * c[2][3] + c[1][3] * c[2][2],
        (c[0][1] * c[3][3] - c[0][3] * c[3][1]) * t - c[1][1] * c[2][3] + c[1][3] * c[2][1],
        c[0][1] * c[3][2] - c[0][2] * c[3][1] - c[1][0] * c[2][3] + c[1][3] * c[2][0],
        (c[0][0] * c[3][3] - c[0][3] * c[3][0]) * n - c[1][1] * c[2][2] + c[1][2] * c[2][1],
        (c[0][0] * c[3][2] - c[0][2] * c[3][0]) * t - c[1][0] * c[2][2] + c[1][2] * c[2][0],
        (c[0][0] * c[3][1] - c[0][1] * c[3][0]) * t - c[1][0] * c[2][1] + c[1][1] * c[2][0],
        -c[0][0] * c[2][3] + 3 * c[0][1] * c[2][2] - 3 * c[0][2] * c[2][1] + c[0][3] * c[2][0],
        -c[0][0] * c[1][3] + 3 * c[0][1] * c[1][2] - 3 * c[0][2] * c[1][1] + c[0][3] * c[1][0],
    ]


def _q_vector(ring: PolyRing, chart: str) -> list:
    a, b = CHART_BASIS["x" + chart[-1]]
    ya, yb, za, zb = (ring.var(v) for v in (f"y{a}", f"y{b}", f"z{a}", f"z{b}"))
    half = ring.field.one / 2
    return [ya * ya, ya * yb, yb * yb, ya * za, (ya * zb + yb * za) * half, yb * zb, za * za, za * zb, zb * zb]


@dataclass(frozen=True)
class GradedIdeal:
    chart: str
    ring: PolyRing
    generators: tuple
    c_table: tuple
    D: tuple
    weights: tuple = (1, 2, 2)
    params: SurfaceParams | None = field(default=None, compare=False)

    @property
    def fiber(self) -> tuple:
        return tuple(self.ring.variables[3:7])

    def degrees(self) -> list:
        return [weighted_degree(g) for g in self.generators]

    def wedge(self) -> MultiPoly:
        ya, yb, za, zb = (self.ring.var(v) for v in self.fiber)
        return ya * zb - yb * za

    def cleared(self) -> list:
        return [g.normalized() for g in self.generators]

    def to_json(self) -> dict:
        out = {
            "field": self.ring.field.label,
            "weights": {"x": self.weights[0], "y": self.weights[1], "z": self.weights[2]},
            "chart": self.chart,
            "generators": [str(g) for g in self.generators],
            "cleared": [str(g) for g in self.cleared()],
            "c_table": [[str(c) for c in row] for row in self.c_table],
            "params": self.params.to_json() if self.params else None,
        }
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def build_from_ctable(c: list, ring: PolyRing, chart: str = "u2", weights=(1, 2, 2),
                      params: SurfaceParams | None = None) -> GradedIdeal:
    """Generators q_k - (w C^t)_k - D_k from a 4x4 table of chart polynomials."""
    c = [[x.to_ring(ring) for x in row] for row in c]
    rows = block_matrix_rows(c)
    w = [ring.var(v) for v in ring.variables[3:7]]
    q = _q_vector(ring, chart)
    D = d_vector(c)
    gens = []
    for k in range(9):
        g = q[k] - D[k]
        for j in range(4):
            if rows[k][j].terms:
                g = g - w[j] * rows[k][j]
        gens.append(g)
    return GradedIdeal(chart, ring, tuple(gens), tuple(tuple(r) for r in c), tuple(D), tuple(weights), params)


def build_ideal(params: SurfaceParams, chart: str = "u2", check: bool = True) -> GradedIdeal:
    """The nine generators on ``chart`` (``u0``, ``u1`` or ``u2``).

    With ``check`` the moduli equation is enforced; turning it off is only
    meant for negative controls.
    """
    if chart not in ("u0", "u1", "u2"):
        raise ValueError("chart must be u0, u1 or u2")
    if check and not params.is_admissible():
        raise ModuliError("moduli equation residual %s" % params.residual)
    ring = fiber_ring(params.field, chart)
    return build_from_ctable(c_table(params, chart), ring, chart, (1, 2, 2), params)


# ---------------------------------------------------------------------------
# equivariance


def _two_copy_u2(ideal: GradedIdeal) -> PolyRing:
    if ideal.chart != "u2":
        raise ValueError("equivariance is checked on the chart u2")
    if not ideal.ring.field.has_omega():
        raise ValueError("the field must contain a primitive cube root of unity")
    return ideal.ring


def check_equivariance(ideal: GradedIdeal, generators=("sigma", "iota", "tau")) -> dict:
    """Reduce the image of every generator of the ideal under sigma, iota, tau.

    Returns generator name -> CheckResult; the witness is the first nonzero
    remainder.
    """
    _two_copy_u2(ideal)
    red = QuadraticReducer(list(ideal.generators), ideal.fiber)
    out = {}
    for g in generators:
        action = GroupAction(g, (0, 0), "xyz")
        res = CheckResult(True)
        for k, gen in enumerate(ideal.generators):
            rem = red.reduce(act_on_chart(gen, action, 2))
            if rem.terms:
                res = CheckResult(False, "generator %d: %s" % (k, rem))
                break
        out[g] = res
    return out


def chart_compatibility(params: SurfaceParams) -> CheckResult:
    """The U2 generators, carried to U0 and U1, lie in the ideals built there.

    Denominators x2^k are cleared before the transition; x2 is a nonzero
    divisor, so membership is unaffected.
    """
    pres = build_euler_ring(0, 2, params.field)
    src = build_ideal(params, "u2")
    for name in ("u0", "u1"):
        tgt = build_ideal(params, name)
        chart = trivialize(pres, "x" + name[-1])
        mapping = {g: e.to_ring(tgt.ring) for g, e in chart.back_map.items()}
        red = QuadraticReducer(list(tgt.generators), tgt.fiber)
        for k, g in enumerate(src.generators):
            _, cl = g.cleared()
            img = substitute(cl.to_ring(chart.ring_with_all()), mapping, tgt.ring)
            rem = red.reduce(img)
            if rem.terms:
                return CheckResult(False, "generator %d does not reduce on %s: %s" % (k, name, rem))
    return CheckResult(True)


# ---------------------------------------------------------------------------
# fibers


_BASIS = ("1", "ya", "yb", "za", "zb", "w")


@dataclass(frozen=True)
class FiberAlgebra:
    """The fiber over a point: basis 1, y_a, y_b, z_a, z_b, w = y_a z_b - y_b z_a."""

    point: tuple
    field: FieldSpec
    names: tuple              # the four fiber variable names
    mult: tuple               # mult[i][j] = coordinates of e_i e_j

    @property
    def dimension(self) -> int:
        return len(self.mult)

    def multiply(self, u, v) -> list:
        fld = self.field
        out = [fld.zero] * 6
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if b:
                    ab = a * b
                    for k, c in enumerate(self.mult[i][j]):
                        if c:
                            out[k] = out[k] + ab * c
        return out

    def unit(self, i: int) -> list:
        return [self.field.one if k == i else self.field.zero for k in range(6)]

    def is_commutative(self) -> bool:
        return all(self.mult[i][j] == self.mult[j][i] for i in range(6) for j in range(6))

    def is_associative(self) -> bool:
        e = [self.unit(i) for i in range(6)]
        for i in range(1, 6):
            for j in range(1, 6):
                ij = self.mult[i][j]
                for k in range(1, 6):
                    if self.multiply(ij, e[k]) != self.multiply(e[i], self.mult[j][k]):
                        return False
        return True

    def mult_matrix(self, u) -> list:
        """Matrix of multiplication by u: column j is u e_j."""
        cols = [self.multiply(u, self.unit(j)) for j in range(6)]
        return [[cols[j][i] for j in range(6)] for i in range(6)]

    def trace(self, u):
        m = self.mult_matrix(u)
        return sum((m[i][i] for i in range(6)), self.field.zero)

    def trace_form(self) -> list:
        return [[self.trace(self.mult[i][j]) for j in range(6)] for i in range(6)]

    def element_of(self, p: MultiPoly) -> list:
        """Coordinates of a polynomial in the fiber variables (x already specialised)."""
        idx = [p.ring.index[n] for n in self.names]
        fld = self.field
        out = [fld.zero] * 6
        gens = [self.unit(k) for k in range(1, 5)]
        for e, c in p.terms.items():
            v = self.unit(0)
            for g, i in zip(gens, idx):
                for _ in range(e[i]):
                    v = self.multiply(v, g)
            out = [a + c * b for a, b in zip(out, v)]
        return out

    def as_polynomial(self, v, ring: PolyRing) -> MultiPoly:
        ya, yb, za, zb = (ring.var(n) for n in self.names)
        basis = [ring.one(), ya, yb, za, zb, ya * zb - yb * za]
        return sum((b * c for b, c in zip(basis, v) if c), ring.zero())


def _specialise(ideal: GradedIdeal, point) -> tuple:
    fld = ideal.ring.field
    pt = [fld(v) for v in point]
    k = int(ideal.chart[-1])
    if not pt[k]:
        raise ValueError("the chart coordinate x%d vanishes at the point" % k)
    vals = dict(zip(BASE, pt))
    gens = [g.evaluate(vals) for g in ideal.generators]
    return pt, gens


def fiber_algebra(ideal: GradedIdeal, point) -> FiberAlgebra:
    """Multiplication table of the fiber over ``point`` by oriented rewriting.

    A quadratic monomial is replaced by its q-combination; the q's are then
    rewritten to linear terms plus constants, leaving w where y_a z_b and
    y_b z_a split.  Products with w expand w once and rewrite the
    same-letter pair first, which keeps every step in degree at most two.
    """
    pt, gens = _specialise(ideal, point)
    fld = ideal.ring.field
    ring = ideal.ring
    names = ideal.fiber
    q = _q_vector(ring, ideal.chart)
    # q_k = (q_k - G_k): linear part and constant
    rules = []
    for qk, g in zip(q, gens):
        r = qk - g
        vec = [fld.zero] * 6
        for e, c in r.terms.items():
            fib = tuple(e[ring.index[n]] for n in names)
            if sum(fib) > 1:
                raise FlatnessError("generator is not of the form q - linear - constant")
            pos = 0 if sum(fib) == 0 else 1 + fib.index(1)
            vec[pos] = vec[pos] + c
        rules.append(vec)
    half = fld.one / 2
    # quadratic monomials as combinations of q's and w (index 9)
    def quad(i, j):
        i, j = min(i, j), max(i, j)
        table = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 1): {2: 1}, (0, 2): {3: 1}, (0, 3): {4: 1, 9: half},
                 (1, 2): {4: 1, 9: -half}, (1, 3): {5: 1}, (2, 2): {6: 1}, (2, 3): {7: 1}, (3, 3): {8: 1}}
        out = [fld.zero] * 6
        for k, c in table[(i, j)].items():
            if k == 9:
                out[5] = out[5] + fld(c)
            else:
                out = [a + fld(c) * b for a, b in zip(out, rules[k])]
        return out

    V = [[quad(i, j) for j in range(4)] for i in range(4)]

    def times_var(v, j, W):
        """v * (fiber variable j), given W[j] = w * var_j when known."""
        out = [fld.zero] * 6
        out[1 + j] = out[1 + j] + v[0]
        for i in range(4):
            if v[1 + i]:
                out = [a + v[1 + i] * b for a, b in zip(out, V[i][j])]
        if v[5]:
            if W[j] is None:
                raise FlatnessError("rewriting loop")
            out = [a + v[5] * b for a, b in zip(out, W[j])]
        return out

    W: list = [None] * 4
    # w * y: rewrite y*y first; w * z: rewrite z*z first
    W[0] = _sub(times_var(V[0][0], 3, W), times_var(V[0][1], 2, W))
    W[1] = _sub(times_var(V[1][0], 3, W), times_var(V[1][1], 2, W))
    W[2] = _sub(times_var(V[2][3], 0, W), times_var(V[2][2], 1, W))
    W[3] = _sub(times_var(V[3][3], 0, W), times_var(V[3][2], 1, W))
    ww = _sub(times_var(W[0], 3, W), times_var(W[1], 2, W))
    mult = [[None] * 6 for _ in range(6)]
    one = [fld.one] + [fld.zero] * 5
    for i in range(6):
        e = [fld.one if k == i else fld.zero for k in range(6)]
        mult[0][i] = e
        mult[i][0] = e
    for i in range(4):
        for j in range(4):
            mult[1 + i][1 + j] = V[i][j]
        mult[1 + i][5] = W[i]
        mult[5][1 + i] = W[i]
    mult[5][5] = ww
    del one
    return FiberAlgebra(tuple(pt), fld, tuple(names), tuple(tuple(tuple(v) for v in r) for r in mult))


def _sub(a, b):
    return [x - y for x, y in zip(a, b)]


def trace_discriminant(fa: FiberAlgebra):
    """Determinant of the trace form; nonzero exactly for etale fibers."""
    return det(fa.trace_form(), fa.field.one)


# ---------------------------------------------------------------------------
# the E x E family and branch curves


def bl_branch_sextic(lam, ring: PolyRing | None = None) -> MultiPoly:
    """Branch sextic of the product family, for a field value or a polynomial lambda."""
    if ring is None:
        ring = lam.ring if isinstance(lam, MultiPoly) else PolyRing(FieldSpec.rationals(), BASE)
    x0, x1, x2 = (ring.var(v) for v in BASE)
    lam = lam.to_ring(ring) if isinstance(lam, MultiPoly) else ring.const(lam)
    c3 = lambda a, b: a ** 3 * b ** 3
    return ((x0 ** 6 + x1 ** 6 + x2 ** 6)
            + 2 * (2 * lam ** 3 - 1) * (c3(x0, x1) + c3(x1, x2) + c3(x2, x0))
            - 6 * lam ** 2 * (x0 ** 4 * x1 * x2 + x0 * x1 ** 4 * x2 + x0 * x1 * x2 ** 4)
            - 3 * lam * (lam ** 3 - 4) * x0 ** 2 * x1 ** 2 * x2 ** 2)


def bl_params(lam, fld: FieldSpec) -> SurfaceParams:
    """Member of the E x E family whose branch curve is bl_branch_sextic(lam).

    beta = (0, 1, 1, 0) and alpha = (0, a, a, 0) with lam = -2a/3.
    """
    a = fld(lam) * -3 / 2
    return SurfaceParams(fld, (0, a, a, 0), (0, 1, 1, 0))


def default_degree_bound() -> int:
    return 3 * 6 * 3 + 12


def branch_on_line(params: SurfaceParams, p0, p1, bound: int | None = None,
                   chart: str = "u2", clear_power: int = 0, jobs: int = 1) -> MultiPoly:
    """Interpolate s -> x_k(s)^clear_power * disc(fiber at p0 + s p1).

    ``bound`` is the degree bound B; B+1 samples determine the polynomial
    and two further samples must agree with it.
    """
    fld = params.field
    if fld.kind != "FP":
        raise ValueError("interpolation runs over a prime field")
    B = default_degree_bound() if bound is None else bound
    if fld.modulus <= B + 2:
        raise ValueError("prime %d too small for degree bound %d" % (fld.modulus, B))
    ideal = build_ideal(params, chart)
    k = int(chart[-1])
    p0 = [fld(v) for v in p0]
    p1 = [fld(v) for v in p1]
    xs, ys = [], []
    s = 0
    while len(xs) < B + 3:
        if s >= fld.modulus:
            raise ValueError("not enough sample points off the chart hyperplane")
        sv = fld(s)
        pt = [a + sv * b for a, b in zip(p0, p1)]
        s += 1
        if not pt[k]:
            continue
        xs.append(sv)
        ys.append(pt[k] ** clear_power)
    vals = _map(partial(_disc_on_line, ideal, tuple(p0), tuple(p1)), xs, jobs)
    ys = [a * b for a, b in zip(ys, vals)]
    coeffs = _interpolate(xs[:B + 1], ys[:B + 1], fld)
    ring = PolyRing(fld, ["s"])
    poly = sum((ring.var("s") ** i * c for i, c in enumerate(coeffs) if c), ring.zero())
    for x, y in zip(xs[B + 1:], ys[B + 1:]):
        if poly.evaluate({"s": x}).constant_value() != y:
            raise ValueError("degree bound %d exceeded" % B)
    return poly


def _disc_on_line(ideal, p0, p1, s):
    return trace_discriminant(fiber_algebra(ideal, [a + s * b for a, b in zip(p0, p1)]))


def _map(fn, xs, jobs):
    if jobs and jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(jobs) as ex:
            return list(ex.map(fn, xs))
    return [fn(x) for x in xs]


def _interpolate(xs, ys, fld) -> list:
    """Newton interpolation; returns coefficients in increasing degree."""
    n = len(xs)
    dd = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j])
    coeffs = [fld.zero] * n
    for i in range(n - 1, -1, -1):
        # coeffs = coeffs * (s - xs[i]) + dd[i]
        new = [fld.zero] * n
        for d in range(n - 1):
            if coeffs[d]:
                new[d + 1] = new[d + 1] + coeffs[d]
                new[d] = new[d] - coeffs[d] * xs[i]
        new[0] = new[0] + dd[i]
        coeffs = new
    return coeffs


# ---------------------------------------------------------------------------
# the irregular variant, weights (1, 2, 3)


def irregular_relation(c: dict):
    return c[(1, 3)] * c[(3, 0)] - 3 * c[(1, 2)] * c[(3, 1)] + 3 * c[(1, 1)] * c[(3, 2)] - c[(1, 0)] * c[(3, 3)]


def build_irregular_ideal(c: dict, fld: FieldSpec | None = None) -> GradedIdeal:
    """Ideal with C0 = C2 = 0 from the entries c[(1, j)], c[(3, j)].

    The c_1j must be forms of weighted degree 2 and the c_3j of degree 4 on
    U2 (x2 may appear with negative exponent).
    """
    sample = next(iter(c.values()))
    fld = fld or sample.ring.field
    ring = fiber_ring(fld, "u2", (1, 2, 3))
    table = [[ring.zero()] * 4 for _ in range(4)]
    for (i, j), v in c.items():
        if i not in (1, 3):
            raise ValueError("only the blocks C1 and C3 are allowed")
        v = v.to_ring(ring)
        want = 2 if i == 1 else 4
        d = weighted_degree(v)
        if v.terms and d != want:
            raise ValueError("c%d%d must be homogeneous of degree %d" % (i, j, want))
        table[i][j] = v
    rel = irregular_relation({(i, j): table[i][j] for i in (1, 3) for j in range(4)})
    if rel.terms:
        raise ModuliError("relation c13c30 - 3c12c31 + 3c11c32 - c10c33 violated")
    return build_from_ctable(table, ring, "u2", (1, 2, 3))


def random_irregular_ctable(fld: FieldSpec, rng: random.Random) -> dict:
    """Random C1, C3 with c10 = x2^2 and c33 solved from the relation."""
    ring = fiber_ring(fld, "u2", (1, 2, 3))
    x2 = ring.var("x2")

    def form(d):
        from .koszul import monomials_of_degree
        p = ring.zero()
        for e in monomials_of_degree(ring, d):
            p = p + MultiPoly(ring, {e: fld.random(rng)})
        return p

    c = {(1, 0): x2 * x2}
    for j in (1, 2, 3):
        c[(1, j)] = form(2)
    for j in (0, 1, 2):
        c[(3, j)] = form(4)
    rest = c[(1, 3)] * c[(3, 0)] - 3 * c[(1, 2)] * c[(3, 1)] + 3 * c[(1, 1)] * c[(3, 2)]
    c[(3, 3)] = rest * c[(1, 0)] ** -1
    return c
