from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from abelsurf.exactring import (INHOMOGENEOUS, QW, FieldSpec, Fp, MultiPoly, NonExactDivision, PolyMatrix,
                                PolyRing, exact_divide, parse_poly, substitute, weighted_degree)
from abelsurf.linalg import det, nullspace, rank, solve

from oracles import W, matrix_det_sympy, reduce_w, same, to_sympy

FIELDS = [FieldSpec.rationals(), FieldSpec.rationals_omega(), FieldSpec.prime(31)]


def test_field_parse_and_labels():
    assert FieldSpec.parse("fp:31") == FieldSpec.prime(31)
    assert FieldSpec.parse("QW").label == "qw"
    for bad in ("fp:9", "fp:2", "r", "fp:x"):
        with pytest.raises(ValueError):
            FieldSpec.parse(bad)


@pytest.mark.parametrize("fld", [FieldSpec.rationals_omega(), FieldSpec.prime(31), FieldSpec.prime(109)])
def test_omega_is_primitive_cube_root(fld):
    w = fld.omega()
    assert w ** 3 == fld.one and w != fld.one
    assert w * w + w + fld.one == fld.zero


def test_omega_in_f31_is_5():
    assert FieldSpec.prime(31).omega() == Fp(5, 31)
    with pytest.raises(ValueError):
        FieldSpec.prime(29).omega()
    with pytest.raises(ValueError):
        FieldSpec.rationals().omega()


qw_elems = st.builds(lambda a, b, c, d: QW(Fraction(a, c), Fraction(b, d)),
                     st.integers(-20, 20), st.integers(-20, 20), st.integers(1, 5), st.integers(1, 5))


@given(qw_elems, qw_elems)
def test_qw_arithmetic_matches_sympy(x, y):
    sx, sy = (sympy.Rational(x.a) + sympy.Rational(x.b) * W, sympy.Rational(y.a) + sympy.Rational(y.b) * W)
    prod = x * y
    assert reduce_w(sx * sy - (sympy.Rational(prod.a) + sympy.Rational(prod.b) * W)) == 0
    if y:
        assert (x / y) * y == x
        assert y * y.inverse() == QW(1)


@given(st.integers(0, 30), st.integers(1, 30))
def test_fp_division(a, b):
    x, y = Fp(a, 31), Fp(b, 31)
    assert (x / y) * y == x
    assert (x / y).v == a * pow(b, -1, 31) % 31


def test_fraction_coercion_into_fp():
    f = FieldSpec.prime(31)
    assert f(Fraction(1, 3)) == Fp(21, 31)
    assert f.from_text("-2/5") * 5 == f(-2)
    with pytest.raises(ZeroDivisionError):
        f(Fraction(1, 31))


def test_sqrt():
    assert FieldSpec.prime(31).sqrt(4) in (Fp(2, 31), Fp(29, 31))
    assert FieldSpec.rationals().sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert FieldSpec.rationals().sqrt(2) is None
    r = FieldSpec.rationals_omega().sqrt(-3)
    assert r * r == QW(-3)


# ---------------------------------------------------------------------------
# polynomials


def _random_poly(ring, rng, terms=5, deg=3):
    fld = ring.field
    p = ring.zero()
    for _ in range(terms):
        e = {v: rng.randrange(deg + 1) for v in ring.variables}
        p = p + ring.monomial(e, fld.random(rng))
    return p


@pytest.mark.parametrize("fld", FIELDS, ids=lambda f: f.label)
def test_ring_arithmetic_matches_sympy(fld, rng):
    ring = PolyRing(fld, ["x0", "x1", "y0", "u"])
    mod = fld.modulus
    for _ in range(15):
        p, q = _random_poly(ring, rng), _random_poly(ring, rng)
        sp, _ = to_sympy(p)
        sq, _ = to_sympy(q)
        assert same(p * q, sympy.expand(sp * sq), mod)
        assert same(p - q, sp - sq, mod)
        assert same(p ** 3, sympy.expand(sp ** 3), mod)


def test_variable_order_is_canonical(q):
    ring = PolyRing(q, ["u", "y1", "x2", "x0"])
    assert ring.variables == ("x0", "x2", "y1", "u")
    assert ring.weights == (1, 1, 2, 0)
    with pytest.raises(ValueError):
        PolyRing(q, ["x0", "w"])


def test_inverted_variable(q):
    ring = PolyRing(q, ["x0", "x2"], inverted="x2")
    x0, x2 = ring.gens("x0", "x2")
    p = x0 ** 2 * x2 ** -3 + x0 * x2 ** -1
    k, c = p.cleared()
    assert k == 3 and c == x0 ** 2 + x0 * x2 ** 2
    with pytest.raises(Exception):
        _ = x0 ** -1
    assert (x2 ** -1) * x2 == ring.one()


def test_parse_format_round_trip(rng):
    for fld in FIELDS:
        ring = PolyRing(fld, ["x0", "x1", "x2", "y0", "a"], inverted="x2")
        for _ in range(10):
            p = _random_poly(ring, rng)
            p = p * ring.var("x2") ** -2
            assert parse_poly(str(p), ring) == p


def test_parse_errors(q):
    ring = PolyRing(q, ["x0"])
    for bad in ("x0 +", "x9", "x0^", "(x0", "x0**-1"):
        with pytest.raises(ValueError):
            parse_poly(bad, ring)


def test_parse_omega():
    ring = PolyRing(FieldSpec.rationals_omega(), ["x0"])
    p = parse_poly("(1 + w)*x0 + w^2", ring)
    assert p == ring.var("x0") * QW(1, 1) + ring.const(QW(-1, -1))


def test_substitute_and_weighted_degree(q):
    ring = PolyRing(q, ["x0", "x1", "y0"])
    x0, x1, y0 = ring.gens("x0", "x1", "y0")
    p = y0 * x0 + x1 ** 3
    assert weighted_degree(p) == 3
    assert weighted_degree(p + x0) == INHOMOGENEOUS
    img = substitute(p, {"y0": x1 * x1, "x0": x1})
    assert img == 2 * x1 ** 3


def test_exact_divide(rng):
    ring = PolyRing(FieldSpec.prime(31), ["x0", "x1", "x2"], inverted="x2")
    for _ in range(10):
        a, b = _random_poly(ring, rng), _random_poly(ring, rng)
        if not b:
            continue
        assert exact_divide(a * b, b) == a
    x0, x1 = ring.gens("x0", "x1")
    with pytest.raises(NonExactDivision):
        exact_divide(x0 * x0 + x1, x0)


def test_normalized_over_q(q):
    ring = PolyRing(q, ["x0", "x1"])
    x0, x1 = ring.gens("x0", "x1")
    p = Fraction(-2, 3) * x0 ** 2 + Fraction(4, 9) * x1 ** 2
    n = p.normalized()
    assert n == 3 * x0 ** 2 - 2 * x1 ** 2


def test_matrix_ops(q):
    ring = PolyRing(q, ["x0", "x1"])
    x0, x1 = ring.gens("x0", "x1")
    A = PolyMatrix(ring, [[x0, x1], [x1, ring.zero()]])
    assert A.is_symmetric() and not A.is_zero()
    assert (A @ PolyMatrix.identity(ring, 2)) == A
    assert A.T == A
    assert A.apply([ring.one(), ring.one()]) == [x0 + x1, x1]


# ---------------------------------------------------------------------------
# linear algebra


@settings(max_examples=30)
@given(st.lists(st.lists(st.integers(-5, 5), min_size=4, max_size=4), min_size=4, max_size=4))
def test_det_matches_sympy(rows):
    m = [[Fraction(v) for v in r] for r in rows]
    assert det(m, Fraction(1)) == matrix_det_sympy(m)


def test_nullspace_and_solve(rng):
    f = FieldSpec.prime(31)
    for _ in range(20):
        rows = [[f.random(rng) for _ in range(6)] for _ in range(4)]
        ns = nullspace(rows, 6, f.zero, f.one)
        assert len(ns) == 6 - rank(rows)
        for v in ns:
            assert all(sum((a * b for a, b in zip(r, v)), f.zero) == 0 for r in rows)
        x = [f.random(rng) for _ in range(6)]
        rhs = [sum((a * b for a, b in zip(r, x)), f.zero) for r in rows]
        sol = solve(rows, rhs, 6, f.zero)
        assert [sum((a * b for a, b in zip(r, sol)), f.zero) for r in rows] == rhs
    assert solve([[f.one, f.one], [f.one, f.one]], [f.one, f.zero], 2, f.zero) is None
