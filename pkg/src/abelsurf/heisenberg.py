"""Heisenberg group actions and the equivariance constraints they impose.

The generators act on the plane by sigma'(x_i) = x_{i+1}, iota'(x_i) = x_{-i}
and tau'(x_i) = xi^i x_i.  Lifts to the fiber variables carry a twist:

    sigma(a):  y_j -> xi^a y_{j+1}
    iota(b):   y_j -> (-1)^b y_{-j}
    tau(c):    y_j -> xi^c xi^{-j} y_j

A cover homomorphism is equivariant when the ideal of its local equations is
mapped to itself.  Testing this on the chart {x2 != 0} and comparing
coefficients gives linear conditions on the beta coefficients; nothing here
is transcribed, every system is derived.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .ambient import BASE, build_euler_ring, trivialize
from .coverhom import BETA_NAMES, BetaVector, triple_cover_coefficients
from .exactring import FieldSpec, MultiPoly, PolyRing, substitute
from .linalg import nullspace, rref, solve

__all__ = [
    "GroupAction", "sigma", "iota", "tau", "ConstraintSystem", "QuadraticReducer",
    "derive_constraints", "solve_equivariant", "SolutionFamily", "classify_two_twist",
    "TwistClass", "induced_action_matrix", "monomial_action_matrix", "monomial_model_check",
    "act_on_chart", "q_vector", "two_copy_relations", "block_matrix_rows", "CASE_LABELS",
]

DEFAULT_FIELD = FieldSpec.rationals_omega()


@dataclass(frozen=True)
class GroupAction:
    """One generator with its twists; ``twists`` has one entry per fiber copy."""

    generator: str
    twists: tuple = (0,)
    scope: str = "xy"

    def __post_init__(self):
        if self.generator not in ("sigma", "iota", "tau"):
            raise ValueError("unknown generator %r" % self.generator)
        if self.scope not in ("x", "xy", "xyz"):
            raise ValueError("scope must be x, xy or xyz")
        mod = 2 if self.generator == "iota" else 3
        object.__setattr__(self, "twists", tuple(int(t) % mod for t in self.twists))

    @property
    def order(self) -> int:
        return 2 if self.generator == "iota" else 3

    @property
    def letters(self) -> list:
        return {"x": [], "xy": ["y"], "xyz": ["y", "z"]}[self.scope]

    def images(self, ring: PolyRing) -> dict:
        """Images of x_i and of the fiber variables of every copy in ``ring``."""
        fld = ring.field
        g = self.generator
        xi = fld.omega() if g != "iota" else None
        out = {}
        for i in range(3):
            if g == "sigma":
                out[f"x{i}"] = ring.var(f"x{(i + 1) % 3}")
            elif g == "iota":
                out[f"x{i}"] = ring.var(f"x{(-i) % 3}")
            else:
                out[f"x{i}"] = ring.var(f"x{i}") * xi ** i
        for letter, tw in zip(self.letters, self.twists + (self.twists[-1],) * 2):
            for j in range(3):
                if g == "sigma":
                    out[f"{letter}{j}"] = ring.var(f"{letter}{(j + 1) % 3}") * xi ** tw
                elif g == "iota":
                    out[f"{letter}{j}"] = ring.var(f"{letter}{(-j) % 3}") * (-1) ** tw
                else:
                    out[f"{letter}{j}"] = ring.var(f"{letter}{j}") * xi ** ((tw - j) % 3)
        return out

    def compose(self, other: "GroupAction", ring: PolyRing) -> dict:
        """x -> other(self(x)): substitute other's images into self's."""
        a, b = self.images(ring), other.images(ring)
        return {k: substitute(v, b, ring) for k, v in a.items()}


def sigma(a: int = 0, scope: str = "xy") -> GroupAction:
    return GroupAction("sigma", (a,), scope)


def iota(b: int = 0, scope: str = "xy") -> GroupAction:
    return GroupAction("iota", (b,), scope)


def tau(c: int = 0, scope: str = "xy") -> GroupAction:
    return GroupAction("tau", (c,), scope)


# ---------------------------------------------------------------------------
# acting on chart polynomials


@lru_cache(maxsize=None)
def _chart(copies: int, fld: FieldSpec):
    return trivialize(build_euler_ring(0, copies, fld), "x2")


def act_on_chart(p: MultiPoly, action: GroupAction, copies: int) -> MultiPoly:
    """Image of a U2-chart polynomial, times the image of a power of x2.

    The denominator x2^k of ``p`` is cleared first; its image is a unit
    multiple of x_{sigma(2)}, which does not affect ideal membership.
    """
    ring = p.ring
    mapping = _chart_mapping(action, copies, ring)
    _, cleared = p.cleared()
    return substitute(cleared, mapping, ring)


def _chart_mapping(action: GroupAction, copies: int, ring: PolyRing) -> dict:
    """Images of the chart coordinates of ``ring``, rewritten on the same chart."""
    key = (action, copies, ring)
    hit = _MAPPING_CACHE.get(key)
    if hit is not None:
        return hit
    chart = _chart(copies, ring.field)
    allr = chart.ring_with_all()
    full = allr.extend([v for v in ring.variables if v not in allr.index])
    imgs = action.images(full)
    back = {g: e.to_ring(ring) for g, e in chart.back_map.items()}
    mapping = {v: substitute(imgs[v], back, ring) for v in ring.variables if v in imgs}
    _MAPPING_CACHE[key] = mapping
    return mapping


_MAPPING_CACHE: dict = {}


class QuadraticReducer:
    """Reduce against relations whose fiber-quadratic parts are fixed forms.

    Each relation is a quadratic form in the fiber variables (constant
    coefficients, linearly independent across relations) plus lower terms.
    """

    def __init__(self, relations: list, fiber: tuple):
        self.relations = relations
        self.fiber = fiber
        ring = relations[0].ring
        self.ring = ring
        fld = ring.field
        mons = set()
        quad = []
        for r in relations:
            parts = {k: v for k, v in r.coefficients_in(fiber).items() if sum(k) == 2}
            for k, v in parts.items():
                if not v.is_constant():
                    raise ValueError("quadratic part must have constant coefficients")
            quad.append({k: v.constant_value() for k, v in parts.items()})
            mons |= set(parts)
        self.monomials = sorted(mons, reverse=True)
        # choose monomials giving an invertible square block
        rows = [[q.get(m, fld.zero) for m in self.monomials] for q in quad]
        _, piv = rref([list(r) for r in rows], len(self.monomials))
        if len(piv) != len(relations):
            raise ValueError("quadratic parts are linearly dependent")
        self.pivots = [self.monomials[j] for j in piv]
        sq = [[rows[i][j] for j in piv] for i in range(len(rows))]
        n = len(rows)
        # inverse of sq (rows: relations, cols: pivot monomials)
        inv = []
        for k in range(n):
            e = [fld.one if i == k else fld.zero for i in range(n)]
            inv.append(solve([[sq[i][j] for i in range(n)] for j in range(n)], e, n, fld.zero))
        self.inverse = inv   # row k of sq^-1; a_i = sum_k f_k inv[k][i]

    def reduce(self, f: MultiPoly) -> MultiPoly:
        parts = f.coefficients_in(self.fiber)
        fp = [parts.get(m, self.ring.zero()) for m in self.pivots]
        rem = f
        n = len(self.relations)
        for i in range(n):
            a = self.ring.zero()
            for k in range(n):
                c = self.inverse[k][i]
                if c and fp[k].terms:
                    a = a + fp[k] * c
            if a.terms:
                rem = rem - a * self.relations[i]
        return rem


def _linear_rows(polys: list, unknowns: list, ring: PolyRing):
    """Coefficient rows (and right-hand sides) of polynomials linear in ``unknowns``."""
    fld = ring.field
    uidx = [ring.index[u] for u in unknowns]
    uset = set(uidx)
    eqs: dict = {}
    for p in polys:
        for e, c in p.terms.items():
            hit = [i for i in uidx if e[i]]
            if len(hit) > 1 or (hit and e[hit[0]] != 1):
                raise ValueError("relation is not linear in the unknowns")
            key = tuple(0 if i in uset else a for i, a in enumerate(e))
            row = eqs.setdefault((id(p), key), [fld.zero] * (len(unknowns) + 1))
            if hit:
                row[uidx.index(hit[0])] = row[uidx.index(hit[0])] + c
            else:
                row[-1] = row[-1] - c
    return [r[:-1] for r in eqs.values()], [r[-1] for r in eqs.values()]


@dataclass(frozen=True)
class ConstraintSystem:
    unknowns: tuple
    rows: tuple            # homogeneous linear relations, reduced echelon form
    field: FieldSpec

    @classmethod
    def from_rows(cls, unknowns, rows, fld) -> "ConstraintSystem":
        red, _ = rref([list(r) for r in rows], len(unknowns)) if rows else ([], [])
        return cls(tuple(unknowns), tuple(tuple(r) for r in red), fld)

    def solutions(self) -> list:
        return nullspace([list(r) for r in self.rows], len(self.unknowns), self.field.zero, self.field.one)

    @property
    def dimension(self) -> int:
        return len(self.unknowns) - len(self.rows)

    def same_relations(self, other: "ConstraintSystem") -> bool:
        return self.unknowns == other.unknowns and self.rows == other.rows

    def combine(self, other: "ConstraintSystem") -> "ConstraintSystem":
        return ConstraintSystem.from_rows(self.unknowns, list(self.rows) + list(other.rows), self.field)

    def describe(self) -> list:
        out = []
        for r in self.rows:
            terms = []
            for c, n in zip(r, self.unknowns):
                if c:
                    terms.append(n if c == 1 else "(%s)*%s" % (c, n))
            out.append(" + ".join(terms) + " = 0")
        return out


def _single_copy_relations(fld: FieldSpec, prefix: str = ""):
    names = [prefix + n for n in BETA_NAMES]
    ring = PolyRing(fld, ["x0", "x1", "x2", "y0", "y1"] + names, inverted="x2")
    beta = BetaVector(*(ring.var(n) for n in names))
    c0, c1, c2, c3 = triple_cover_coefficients(beta, ring)
    y0, y1 = ring.var("y0"), ring.var("y1")
    rels = [y0 * y0 - c1 * y0 - c0 * y1, y0 * y1 + c2 * y0 + c1 * y1, y1 * y1 - c3 * y0 - c2 * y1]
    return ring, names, rels


def derive_constraints(action: GroupAction, fld: FieldSpec = DEFAULT_FIELD) -> ConstraintSystem:
    """Linear conditions on the betas for the action to preserve the local equations."""
    if action.scope != "xy":
        raise ValueError("single-copy constraints need an x+y action")
    ring, names, rels = _single_copy_relations(fld)
    red = QuadraticReducer(rels, ("y0", "y1"))
    rems = [red.reduce(act_on_chart(r, action, 1)) for r in rels]
    rows, rhs = _linear_rows(rems, names, ring)
    if any(rhs):
        raise AssertionError("action does not preserve the quadratic parts")
    return ConstraintSystem.from_rows(BETA_NAMES, rows, fld)


def induced_action_matrix(action: GroupAction, fld: FieldSpec = DEFAULT_FIELD) -> list:
    """10x10 matrix A with g(Phi_beta) = Phi_{A beta}: row k gives beta'_k."""
    ring, names, rels = _single_copy_relations(fld)
    ring2, names2, rels2 = _single_copy_relations(fld, "n_")
    big = ring.extend(names2)
    rels = [r.to_ring(big) for r in rels]
    rels2 = [r.to_ring(big) for r in rels2]
    red = QuadraticReducer(rels2, ("y0", "y1"))
    cols = []
    for j, n in enumerate(names):
        plug = {m: (1 if m == n else 0) for m in names}
        src = [r.evaluate(plug) for r in rels]
        rems = [red.reduce(act_on_chart(r, action, 1)) for r in src]
        rows, rhs = _linear_rows(rems, names2, big)
        sol = solve(rows, rhs, len(names2), fld.zero)
        if sol is None:
            raise AssertionError("image is not a cover homomorphism of the same shape")
        cols.append(sol)
    return [[cols[j][k] for j in range(10)] for k in range(10)]


_MONOMIAL = {"b0": (3, 0, 0), "b1": (0, 3, 0), "b2": (0, 0, 3), "b01": (2, 1, 0), "b02": (2, 0, 1),
             "b10": (1, 2, 0), "b12": (0, 2, 1), "b20": (1, 0, 2), "b21": (0, 1, 2), "b012": (1, 1, 1)}


def monomial_action_matrix(action: GroupAction, fld: FieldSpec = DEFAULT_FIELD) -> list:
    """The same action on the cubic monomials x_i^3, x_i^2 x_j, x0 x1 x2."""
    ring = PolyRing(fld, BASE)
    imgs = GroupAction(action.generator, action.twists, "x").images(ring)
    lookup = {v: k for k, v in _MONOMIAL.items()}
    mat = [[fld.zero] * 10 for _ in range(10)]
    for j, n in enumerate(BETA_NAMES):
        mono = ring.monomial(dict(zip(BASE, _MONOMIAL[n])))
        img = substitute(mono, imgs, ring)
        (e, c), = img.terms.items()
        mat[BETA_NAMES.index(lookup[e])][j] = c
    return mat


def monomial_model_check(action: GroupAction, fld: FieldSpec = DEFAULT_FIELD) -> bool:
    """True when the induced beta action is the action on the monomial model.

    The betas transform as coordinates dual to the monomials, so A is
    compared with the inverse transpose of the monomial matrix.  For the
    permutations sigma and iota this is the monomial matrix itself; for tau
    it is the monomial action with xi replaced by xi^-1.
    """
    A = induced_action_matrix(action, fld)
    P = monomial_action_matrix(action, fld)
    n = 10
    cols = [solve(P, [fld.one if i == k else fld.zero for i in range(n)], n, fld.zero) for k in range(n)]
    # cols[k] is column k of P^-1, hence row k of (P^-1)^t
    return A == [list(c) for c in cols]


@dataclass(frozen=True)
class SolutionFamily:
    unknowns: tuple
    basis: tuple

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def surviving(self) -> list:
        return [n for k, n in enumerate(self.unknowns) if any(v[k] for v in self.basis)]


def solve_equivariant(actions, fld: FieldSpec = DEFAULT_FIELD) -> SolutionFamily:
    systems = [derive_constraints(a, fld) for a in actions]
    total = systems[0]
    for s in systems[1:]:
        total = total.combine(s)
    return SolutionFamily(BETA_NAMES, tuple(tuple(v) for v in total.solutions()))


# ---------------------------------------------------------------------------
# two copies


def q_vector(ring: PolyRing) -> list:
    """The nine quadrics: y-block, symmetric mixed block, z-block."""
    y0, y1, z0, z1 = (ring.var(v) for v in ("y0", "y1", "z0", "z1"))
    half = ring.field.one / 2
    return [y0 * y0, y0 * y1, y1 * y1, y0 * z0, (y0 * z1 + y1 * z0) * half, y1 * z1, z0 * z0, z0 * z1, z1 * z1]


def block_matrix_rows(c: list) -> list:
    """The 9x4 matrix [[C1, C0], [-C2, -C1], [C3, C2]] from c[i] = (c_i0, .., c_i3)."""
    def blk(i, sign=1):
        ci0, ci1, ci2, ci3 = c[i]
        return [[ci1 * sign, ci0 * sign], [-ci2 * sign, -ci1 * sign], [ci3 * sign, ci2 * sign]]
    rows = []
    for left, right in ((blk(1), blk(0)), (blk(2, -1), blk(1, -1)), (blk(3), blk(2))):
        for a, b in zip(left, right):
            rows.append(a + b)
    return rows


def two_copy_relations(c: list, ring: PolyRing, D: list | None = None) -> list:
    """Generators q_k - (w C^t)_k - D_k with w = (y0, y1, z0, z1)."""
    w = [ring.var(v) for v in ("y0", "y1", "z0", "z1")]
    rows = block_matrix_rows(c)
    q = q_vector(ring)
    out = []
    for k in range(9):
        g = q[k]
        for j in range(4):
            if rows[k][j].terms:
                g = g - w[j] * rows[k][j]
        if D is not None:
            g = g - D[k]
        out.append(g)
    return out


CASE_LABELS = {
    "proportional": "C0=gamma*C3, C1=C2=0",
    "only_c1": "C0=C2=C3=0",
    "only_c2": "C0=C1=C3=0",
    "common": "common sigma-relations for all blocks",  # ι removes them unless m = n = 0
    "zero": "zero family",
}


@dataclass(frozen=True)
class TwistClass:
    m: int
    n: int
    case: str
    label: str
    dimension: int
    surviving_blocks: tuple
    block_twists: dict = field(compare=False)
    certificate: str = ""


@lru_cache(maxsize=None)
def _two_copy_model(fld: FieldSpec):
    names = [f"C{i}_{n}" for i in range(4) for n in BETA_NAMES]
    ring = PolyRing(fld, ["x0", "x1", "x2", "y0", "y1", "z0", "z1"] + names, inverted="x2")
    c = [triple_cover_coefficients(BetaVector(*(ring.var(f"C{i}_{n}") for n in BETA_NAMES)), ring)
         for i in range(4)]
    rels = two_copy_relations(c, ring)
    wedge = ring.var("y0") * ring.var("z1") - ring.var("y1") * ring.var("z0")
    # the wedge is the unprojection direction: its multiples are not constrained
    return ring, names, rels, QuadraticReducer(rels + [wedge], ("y0", "y1", "z0", "z1"))


def _two_copy_constraints(action: GroupAction, fld: FieldSpec) -> ConstraintSystem:
    ring, names, rels, red = _two_copy_model(fld)
    rems = [red.reduce(act_on_chart(r, action, 2)) for r in rels]
    rows, rhs = _linear_rows(rems, names, ring)
    if any(rhs):
        raise AssertionError("action does not preserve the quadratic parts")
    return ConstraintSystem.from_rows(tuple(names), rows, fld)


@lru_cache(maxsize=None)
def _classify(m: int, n: int, fld: FieldSpec) -> TwistClass:
    actions = [GroupAction("sigma", (m, n), "xyz"), GroupAction("iota", (0, 0), "xyz"),
               GroupAction("tau", (0, 0), "xyz")]
    total = None
    for a in actions:
        s = _two_copy_constraints(a, fld)
        total = s if total is None else total.combine(s)
    sols = total.solutions()
    names = total.unknowns
    alive = tuple(i for i in range(4) if any(v[k] for v in sols for k, nm in enumerate(names)
                                             if nm.startswith(f"C{i}_")))
    # which single-copy sigma twist each block obeys under sigma~ alone
    sig = _two_copy_constraints(actions[0], fld)
    twists = {}
    for i in range(4):
        idx = [k for k, nm in enumerate(names) if nm.startswith(f"C{i}_")]
        block_rows = []
        for r in sig.rows:
            if any(r[k] for k in idx) and not any(r[k] for k in range(len(names)) if k not in idx):
                block_rows.append([r[k] for k in idx])
        blk = ConstraintSystem.from_rows(BETA_NAMES, block_rows, fld)
        twists[i] = next((a for a in range(3) if blk.same_relations(derive_constraints(sigma(a), fld))), None)
    dim = len(sols)
    cert = ""
    if m != n:
        if alive == (0, 3):
            case = "proportional"
            cert = _proportionality_certificate(sols, names, fld)
        elif alive == (1,):
            case = "only_c1"
        elif alive == (2,):
            case = "only_c2"
        elif not alive:
            case = "zero"
        else:
            raise AssertionError("unexpected surviving blocks %s" % (alive,))
    else:
        case = "common"
    return TwistClass(m, n, case, CASE_LABELS[case], dim, alive, twists, cert)


def _proportionality_certificate(sols, names, fld) -> str:
    """On the C0/C3 family the moduli pairing is a multiple of the 2x2 minor.

    The family carries (beta_0, alpha) for C0 and for C3; the moduli equation
    restricted to it is proportional to det [[b0(C0), a(C0)], [b0(C3), a(C3)]],
    so admissible points have C0 and C3 proportional.
    """
    from .abelian13 import moduli_residual

    ring = PolyRing(fld, [f"t{k}" for k in range(len(sols))])
    ts = [ring.var(f"t{k}") for k in range(len(sols))]

    def coord(nm):
        k = names.index(nm)
        return sum((t * v[k] for t, v in zip(ts, sols)), ring.zero())

    alpha = [coord(f"C{i}_b012") for i in range(4)]
    beta = [coord(f"C{i}_b0") for i in range(4)]
    res = moduli_residual(alpha, beta)
    minor = beta[0] * alpha[3] - beta[3] * alpha[0]
    if minor.is_zero():
        return "C0 and C3 are proportional on the whole family"
    lc = res.leading_term()
    ratio = lc[1] / minor.leading_term()[1] if lc else fld.zero
    if res != minor * ratio or not ratio:
        raise AssertionError("moduli pairing is not a multiple of the C0/C3 minor")
    return "moduli residual = (%s) * det[[b0(C0), a(C0)], [b0(C3), a(C3)]]" % ratio


def classify_two_twist(m: int, n: int, fld: FieldSpec = DEFAULT_FIELD) -> TwistClass:
    """Classify the two-copy homomorphisms for sigma~ = diag(xi^m, xi^n).

    sigma~ carries the twists (m, n); iota and tau act untwisted.  Blocks
    with a nonzero effective twist are forced to vanish.
    """
    return _classify(m % 3, n % 3, fld)
