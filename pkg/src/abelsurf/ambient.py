"""Graded ambient rings of presented bundles over the projective plane.

A :class:`Presentation` lists fiber generators with weights and a matrix M
whose columns give relations ``sum_j gen_j * M[j][k] = 0``.  Inverting one
base coordinate lets Gaussian elimination solve each relation for one fiber
generator; the result is a :class:`Chart`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exactring import FieldSpec, MultiPoly, PolyMatrix, PolyRing, exact_divide, substitute, weighted_degree

__all__ = [
    "Presentation", "Chart", "Transition", "build_euler_ring", "trivialize",
    "transition", "unprojection_t", "BASE", "chart_name", "minor_quotients_agree", "wedge_vector",
]

BASE = ("x0", "x1", "x2")


def chart_name(inverted: str) -> str:
    return "u" + inverted[1]


@dataclass(frozen=True)
class Presentation:
    generators: tuple          # ((name, weight), ...)
    matrix: PolyMatrix         # rows = generators, columns = relations
    ring: PolyRing             # base coordinates plus generators, nothing inverted

    @property
    def names(self) -> list:
        return [g for g, _ in self.generators]

    @property
    def relations(self) -> list:
        gens = [self.ring.var(g) for g in self.names]
        n, m = self.matrix.shape
        return [sum((gens[j] * self.matrix[j, k] for j in range(n)), self.ring.zero()) for k in range(m)]


def build_euler_ring(m: int = 0, copies: int = 1, fld: FieldSpec | None = None) -> Presentation:
    """Euler presentation of Omega^1(-m) (one copy) or of two copies.

    Fiber generators y0,y1,y2 (and z0,z1,z2) have weight m+2; the relations
    are sum x_i y_i (and sum x_i z_i).
    """
    if m < 0 or copies not in (1, 2):
        raise ValueError("need m >= 0 and one or two copies")
    fld = fld or FieldSpec.rationals()
    letters = ["y"] if copies == 1 else ["y", "z"]
    gens = [(f"{c}{i}", m + 2) for c in letters for i in range(3)]
    ring = PolyRing(fld, list(BASE) + [g for g, _ in gens], dict(gens))
    rows = []
    for c in letters:
        for i in range(3):
            rows.append([ring.var(f"x{i}") if c2 == c else ring.zero() for c2 in letters])
    return Presentation(tuple(gens), PolyMatrix(ring, rows), ring)


@dataclass(frozen=True)
class Chart:
    presentation: Presentation
    inverted: str
    ring: PolyRing            # x's plus surviving generators, ``inverted`` a unit
    basis: tuple
    back_map: dict = field(compare=False)   # eliminated generator -> chart polynomial

    @property
    def name(self) -> str:
        return chart_name(self.inverted)

    def eliminate(self, p: MultiPoly) -> MultiPoly:
        """Rewrite a polynomial of the presentation ring in chart coordinates."""
        return substitute(p.to_ring(self.ring_with_all()), self.back_map, self.ring)

    def ring_with_all(self) -> PolyRing:
        pres = self.presentation.ring
        return pres.with_inverted(self.inverted)

    def check_relations(self) -> bool:
        return all(self.eliminate(r).is_zero() for r in self.presentation.relations)


def _is_unit_monomial(p: MultiPoly, inverted: str) -> bool:
    if len(p.terms) != 1:
        return False
    return p.variables_used() <= {inverted}


def trivialize(p: Presentation, inverted: str) -> Chart:
    """Solve each relation for one generator after inverting a base coordinate.

    The pivot of each column is the entry that is a unit on the chart, the
    one with smallest row index winning.
    """
    if inverted not in BASE:
        raise ValueError("can only invert a base coordinate")
    full = p.ring.with_inverted(inverted)
    n, m = p.matrix.shape
    cols = [[p.matrix[j, k].to_ring(full) for j in range(n)] for k in range(m)]
    names = p.names
    back: dict = {}
    for k in range(m):
        col = cols[k]
        piv = next((j for j in range(n) if names[j] not in back and _is_unit_monomial(col[j], inverted)), None)
        if piv is None:
            raise ValueError("elimination fails for relation %d on the chart %s" % (k, chart_name(inverted)))
        inv = col[piv] ** -1
        expr = full.zero()
        for j in range(n):
            if j != piv and col[j]:
                expr = expr - col[j] * full.var(names[j])
        expr = expr * inv
        g = names[piv]
        back = {h: substitute(v, {g: expr}, full) for h, v in back.items()}
        back[g] = expr
        # later columns see the eliminated generator replaced
        for k2 in range(k + 1, m):
            c2 = cols[k2]
            if c2[piv]:
                for j in range(n):
                    if j != piv:
                        c2[j] = c2[j] - c2[piv] * col[j] * inv
                c2[piv] = full.zero()
    basis = tuple(g for g in names if g not in back)
    ring = PolyRing(p.ring.field, list(BASE) + list(basis),
                    {g: w for g, w in p.generators}, inverted)
    back = {g: e.to_ring(ring) for g, e in back.items()}
    return Chart(p, inverted, ring, basis, back)


@dataclass(frozen=True)
class Transition:
    """Coordinates of chart ``target`` written on chart ``source``.

    ``mapping`` sends every base coordinate and every basis generator of the
    target chart to a polynomial of the source chart ring.  ``pull`` carries
    target-chart polynomials to the source chart.
    """

    source: Chart
    target: Chart
    mapping: dict = field(compare=False)

    def pull(self, p: MultiPoly) -> MultiPoly:
        ring = self.source.ring
        inv = self.target.inverted
        k, cleared = p.cleared()
        if inv == self.source.inverted or k == 0:
            img = substitute(cleared, self.mapping, ring)
            return img if k == 0 else img * ring.var(inv) ** -k
        img = substitute(cleared, self.mapping, ring)
        return exact_divide(img, ring.var(inv) ** k)


def transition(p: Presentation, source: Chart, target: Chart) -> Transition:
    """The substitution expressing the target chart's coordinates on the source chart."""
    if source.presentation != p or target.presentation != p:
        raise ValueError("charts of a different presentation")
    ring = source.ring
    mapping = {x: ring.var(x) for x in BASE}
    for g in target.basis:
        mapping[g] = ring.var(g) if g in source.basis else source.back_map[g]
    return Transition(source, target, mapping)


@dataclass(frozen=True)
class Unprojection:
    t: MultiPoly            # the element t on the chart
    wedge: MultiPoly        # the chart minor w = y_a z_b - y_b z_a
    sign: int               # w = sign * t * x_inverted


def wedge_vector(ring: PolyRing) -> list:
    """(y1z2 - y2z1, y2z0 - y0z2, y0z1 - y1z0) in a ring holding all six generators."""
    y = [ring.var(f"y{i}") for i in range(3)]
    z = [ring.var(f"z{i}") for i in range(3)]
    return [y[(k + 1) % 3] * z[(k + 2) % 3] - y[(k + 2) % 3] * z[(k + 1) % 3] for k in range(3)]


def unprojection_t(chart: Chart) -> Unprojection:
    """t with wedge_k = t * x_k, computed on the chart where x_k is inverted.

    The same sign holds for every k: the cross product of the y and z
    vectors is orthogonal to both and hence proportional to (x0, x1, x2).
    """
    names = chart.presentation.names
    if not {"z0", "z1", "z2"} <= set(names):
        raise ValueError("unprojection needs the two-copy Euler presentation")
    k = BASE.index(chart.inverted)
    full = chart.ring_with_all()
    minor = wedge_vector(full)[k]
    t = chart.eliminate(minor) * chart.ring.var(chart.inverted) ** -1
    a, b = [i for i in range(3) if i != k]
    ring = chart.ring
    w = ring.var(f"y{a}") * ring.var(f"z{b}") - ring.var(f"y{b}") * ring.var(f"z{a}")
    prod = t * ring.var(chart.inverted)
    sign = 1 if w == prod else -1
    if sign == -1 and w != -prod:
        raise AssertionError("chart wedge is not a multiple of t")
    assert weighted_degree(t) == 3 or t.is_zero()
    return Unprojection(t, w, sign)


def minor_quotients_agree(chart: Chart) -> bool:
    """All three quotients wedge_k / x_k coincide once the relations are imposed."""
    full = chart.ring_with_all()
    wv = [chart.eliminate(m) for m in wedge_vector(full)]
    xs = [chart.ring.var(x) for x in BASE]
    return all((wv[i] * xs[j] - wv[j] * xs[i]).is_zero() for i in range(3) for j in range(i + 1, 3))
