import random
from fractions import Fraction

import pytest

from abelsurf import abelian13
from abelsurf.abelian13 import (FlatnessError, ModuliError, SurfaceParams, bl_branch_sextic, bl_params,
                                branch_on_line, build_ideal, build_irregular_ideal, c_table, chart_compatibility,
                                check_equivariance, check_moduli_equation, fiber_algebra, flatness_quadrics,
                                irregular_relation, reference_d_vector, random_irregular_ctable,
                                trace_discriminant)
from abelsurf.acceptance import oracle_agrees
from abelsurf.exactring import FieldSpec, PolyRing, exact_divide, substitute, weighted_degree

from oracles import fiber_dimension_sympy


def _point(fld, rng):
    while True:
        pt = [fld.random(rng) for _ in range(3)]
        if pt[2]:
            return pt


def test_residual_examples(q):
    assert check_moduli_equation((1, 0, 0, 0), (0, 0, 0, 1)) == Fraction(1, 3)
    assert check_moduli_equation((0, 1, 1, 0), (0, 1, 1, 0)) == 0
    ring = PolyRing(q, ["a0", "a1", "a2", "a3"])
    a = [ring.var("a%d" % i) for i in range(4)]
    one, zero = ring.one(), ring.zero()
    assert check_moduli_equation(a, [zero, one, one, zero]) == a[2] - a[1]


def test_gate(f31):
    with pytest.raises(ModuliError):
        build_ideal(SurfaceParams(f31, (1, 0, 0, 0), (0, 0, 0, 1)))
    build_ideal(SurfaceParams(f31, (1, 0, 0, 0), (0, 0, 0, 1)), check=False)


def test_params_json_round_trip(q, rng):
    p = SurfaceParams.random(q, rng)
    assert p.is_admissible()
    assert SurfaceParams.from_json(p.to_json()) == p
    with pytest.raises(ValueError):
        SurfaceParams(q, (1, 2, 3), (0, 0, 0, 0))


@pytest.mark.parametrize("chart", ["u0", "u1", "u2"])
def test_generators_are_homogeneous(chart, f31, rng):
    ideal = build_ideal(SurfaceParams.random(f31, rng), chart)
    assert ideal.degrees() == [4] * 9
    assert len(ideal.to_json()["generators"]) == 9


def test_flatness_quadrics_vanish_exactly_on_admissible(f31, rng):
    p = SurfaceParams.random(f31, rng)
    assert all(not f.terms for f in flatness_quadrics(c_table(p)))
    bad = SurfaceParams(f31, p.alpha, (p.beta[0] + 1,) + p.beta[1:])
    assert any(f.terms for f in flatness_quadrics(c_table(bad)))


def test_reference_constant_column_spot_check():
    c = [[0] * 4, [0, 1, 0, 0], [0] * 4, [0] * 4]
    assert reference_d_vector(c) == [-2, 0, 0, 0, 0, 0, 0, 0, 0]


def test_reference_sign_of_constant_column_is_not_flat(f31, rng, monkeypatch):
    """With the reference column (instead of its negative) fibers stop being associative."""
    p = SurfaceParams.random(f31, rng)
    monkeypatch.setattr(abelian13, "d_vector", reference_d_vector)
    ideal = build_ideal(p)
    bad = 0
    for _ in range(5):
        try:
            fa = fiber_algebra(ideal, _point(f31, rng))
            bad += not fa.is_associative()
        except FlatnessError:
            bad += 1
    assert bad


def test_fibers_against_sympy(f31, rng):
    for _ in range(2):
        ideal = build_ideal(SurfaceParams.random(f31, rng))
        for _ in range(3):
            pt = _point(f31, rng)
            assert fiber_dimension_sympy(ideal, pt, 31) == 6
            fa = fiber_algebra(ideal, pt)
            assert fa.is_commutative() and fa.is_associative()


def test_fibers_against_internal_oracle(f31, rng):
    ideal = build_ideal(SurfaceParams.random(f31, rng))
    dim, mismatches, _ = oracle_agrees(ideal, _point(f31, rng), rng, monomials=30)
    assert (dim, mismatches) == (6, 0)


def test_fiber_over_q(q, rng):
    ideal = build_ideal(SurfaceParams.random(q, rng))
    fa = fiber_algebra(ideal, (1, 2, 3))
    assert fa.is_associative()
    assert trace_discriminant(fa) != 0


def test_fiber_needs_chart_point(f31, rng):
    ideal = build_ideal(SurfaceParams.random(f31, rng))
    with pytest.raises(ValueError):
        fiber_algebra(ideal, (1, 2, 0))


def test_negative_control_not_associative(f31, rng):
    hits = 0
    for _ in range(5):
        p = SurfaceParams(f31, [f31.random(rng) for _ in range(4)], [f31.random(rng) for _ in range(4)])
        if p.is_admissible():
            continue
        ideal = build_ideal(p, check=False)
        fa = fiber_algebra(ideal, _point(f31, rng))
        hits += not fa.is_associative()
    assert hits


@pytest.mark.parametrize("fld", [FieldSpec.prime(31), FieldSpec.rationals_omega()], ids=lambda f: f.label)
def test_equivariance(fld, rng):
    ideal = build_ideal(SurfaceParams.random(fld, rng))
    assert all(r.ok for r in check_equivariance(ideal).values())


def test_equivariance_needs_u2_and_omega(rng):
    with pytest.raises(ValueError):
        check_equivariance(build_ideal(SurfaceParams.random(FieldSpec.prime(31), rng), "u0"))
    with pytest.raises(ValueError):
        check_equivariance(build_ideal(SurfaceParams.random(FieldSpec.rationals(), rng)))


def test_chart_compatibility(f31, rng):
    assert chart_compatibility(SurfaceParams.random(f31, rng)).ok


def test_branch_locus_contains_cube_of_sextic():
    fld = FieldSpec.prime(127)
    params = bl_params(3, fld)
    assert params.is_admissible()
    p0, p1 = (2, 7, 1), (3, 1, 5)
    f = branch_on_line(params, p0, p1)
    ring = f.ring
    s = ring.var("s")
    line = {"x%d" % i: ring.const(p0[i]) + s * p1[i] for i in range(3)}
    C = substitute(bl_branch_sextic(3, PolyRing(fld, ["x0", "x1", "x2"])), line, ring)
    rest = exact_divide(f, C ** 3)
    rest = exact_divide(rest, line["x2"] ** 6)
    assert rest.is_constant() and rest.constant_value()


def test_branch_parallel_matches_serial():
    fld = FieldSpec.prime(109)
    params = bl_params(2, fld)
    a = branch_on_line(params, (1, 4, 2), (5, 1, 3))
    b = branch_on_line(params, (1, 4, 2), (5, 1, 3), jobs=2)
    assert a == b


def test_branch_rejects_small_prime():
    with pytest.raises(ValueError):
        branch_on_line(bl_params(2, FieldSpec.prime(31)), (1, 4, 2), (5, 1, 3))


def test_irregular_variant(f31, rng):
    c = random_irregular_ctable(f31, rng)
    assert not irregular_relation(c).terms
    ideal = build_irregular_ideal(c)
    assert ideal.degrees() == [4, 4, 4, 5, 5, 5, 6, 6, 6]
    for _ in range(3):
        pt = _point(f31, rng)
        assert fiber_dimension_sympy(ideal, pt, 31) == 6
        assert fiber_algebra(ideal, pt).is_associative()


def test_irregular_rejections(f31, rng):
    c = random_irregular_ctable(f31, rng)
    ring = c[(1, 0)].ring
    bad = dict(c)
    bad[(3, 3)] = c[(3, 3)] + ring.var("x0") ** 4
    with pytest.raises(ModuliError):
        build_irregular_ideal(bad)
    wrong_degree = dict(c)
    wrong_degree[(1, 1)] = ring.var("x0")
    with pytest.raises(ValueError):
        build_irregular_ideal(wrong_degree)


def test_irregular_weights(f31, rng):
    ideal = build_irregular_ideal(random_irregular_ctable(f31, rng))
    assert ideal.weights == (1, 2, 3)
    assert all(weighted_degree(g) in (4, 5, 6) for g in ideal.generators)


def test_zero_parameters_give_the_cone():
    fld = FieldSpec.prime(109)
    p = SurfaceParams(fld, (0, 0, 0, 0), (0, 0, 0, 0))
    ideal = build_ideal(p)
    ring = ideal.ring
    y0, y1, z0, z1 = (ring.var(v) for v in ("y0", "y1", "z0", "z1"))
    half = fld.one / 2
    assert list(ideal.generators) == [y0 * y0, y0 * y1, y1 * y1, y0 * z0, (y0 * z1 + y1 * z0) * half,
                                      y1 * z1, z0 * z0, z0 * z1, z1 * z1]
    fa = fiber_algebra(ideal, (1, 2, 3))
    assert fa.trace(fa.unit(0)) == 6
    assert trace_discriminant(fa) == 0
    assert not branch_on_line(p, (1, 2, 3), (2, 1, 1)).terms


def test_generator_layout(f31, rng):
    """y0^2 = c11 y0 + c10 y1 + c01 z0 + c00 z1 + D0 on U2."""
    ideal = build_ideal(SurfaceParams.random(f31, rng))
    ring, c = ideal.ring, ideal.c_table
    y0, y1, z0, z1 = (ring.var(v) for v in ("y0", "y1", "z0", "z1"))
    rhs = c[1][1] * y0 + c[1][0] * y1 + c[0][1] * z0 + c[0][0] * z1 + ideal.D[0]
    assert ideal.generators[0] == y0 * y0 - rhs


def test_c_table_spot_value(q):
    ideal = build_ideal(SurfaceParams(q, (0, 0, 0, 0), (1, 0, 0, 0)))
    x1, x2 = ideal.ring.var("x1"), ideal.ring.var("x2")
    assert ideal.c_table[0][0] == x2 ** 2 - x1 ** 3 * x2 ** -1


@pytest.mark.parametrize("gen", ["sigma", "iota", "tau"])
def test_sextic_invariance(gen, qw):
    from abelsurf.heisenberg import GroupAction
    ring = PolyRing(qw, ["x0", "x1", "x2", "l"])
    C = bl_branch_sextic(ring.var("l"), ring)
    assert substitute(C, GroupAction(gen, (0,), "x").images(ring), ring) == C


def test_sextic_at_zero(q):
    ring = PolyRing(q, ["x0", "x1", "x2"])
    x0, x1, x2 = ring.gens("x0", "x1", "x2")
    expect = x0 ** 6 + x1 ** 6 + x2 ** 6 - 2 * (x0 ** 3 * x1 ** 3 + x1 ** 3 * x2 ** 3 + x2 ** 3 * x0 ** 3)
    assert bl_branch_sextic(0, ring) == expect


def test_discriminant_vanishes_on_the_sextic():
    fld = FieldSpec.prime(109)
    ideal = build_ideal(bl_params(2, fld))
    ring = PolyRing(fld, ["x0", "x1", "x2"])
    C = bl_branch_sextic(2, ring)
    on = off = 0
    for a in range(1, 109):
        for b in range(1, 5):
            pt = (a, b, 1)
            val = C.evaluate(dict(zip(("x0", "x1", "x2"), pt))).constant_value()
            disc = trace_discriminant(fiber_algebra(ideal, pt))
            assert bool(val) == bool(disc)
            on += not val
            off += bool(val)
    assert on and off


def test_moduli_weights_one_third(f31, rng):
    """Weights 3 on the outer terms (instead of 1/3) do not give flat fibers."""
    alpha, beta = (1, 0, 1, 0), (0, -3, 0, 1)
    assert 3 * alpha[0] * beta[3] - alpha[1] * beta[2] + alpha[2] * beta[1] - 3 * alpha[3] * beta[0] == 0
    p = SurfaceParams(f31, alpha, beta)
    assert not p.is_admissible()
    ideal = build_ideal(p, check=False)
    assert any(not fiber_algebra(ideal, _point(f31, rng)).is_associative() for _ in range(5))
