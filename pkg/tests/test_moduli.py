import random
import warnings
from fractions import Fraction

import pytest

from abelsurf.abelian13 import SurfaceParams
from abelsurf.exactring import FieldSpec, PolyRing
from abelsurf.moduli import (S3_WORDS, DegenerateError, IrrationalPointsError, apply_change, delta_coords,
                             distinctness, is_bielliptic_locus, moduli_invariants, moduli_point,
                             normalize_beta, orbit, orbit_equivalent, s3_act, standard_action_certificate,
                             table_from_matrices, three_points, transform_cubic)

from oracles import bruteforce_roots_mod_p


def test_three_points_standard(q):
    pts = three_points((0, 1, 1, 0), q)
    assert sorted(pts) == sorted([(-1, -1), (2, -1), (-1, 2)])


def test_distinctness_symbolic(q):
    ring = PolyRing(q, ["l"])
    lam = ring.var("l")
    assert distinctness((ring.zero(), lam, lam, ring.zero())) == -3 * lam ** 4


def test_distinctness_detects_double_roots(q):
    # F = 3 u^2 v has a double root at v... u = 0 twice
    assert distinctness((0, 1, 0, 0)) == 0
    assert distinctness((0, 1, 1, 0)) != 0


def _cubic_roots_count(c, p):
    coeffs = [c[3], 3 * c[2], 3 * c[1], c[0]]
    return len(bruteforce_roots_mod_p([int(x.v) for x in coeffs], p)) + (not c[0])


def test_normalize_round_trip_over_fp(rng):
    fld = FieldSpec.prime(31)
    done = 0
    for _ in range(60):
        p = SurfaceParams.random(fld, rng)
        if not distinctness(p.beta) or _cubic_roots_count(p.beta, 31) != 3:
            with pytest.raises((DegenerateError, IrrationalPointsError)):
                normalize_beta(p)
            continue
        g, n = normalize_beta(p)
        assert n.beta == tuple(fld(x) for x in (0, 1, 1, 0))
        assert n.is_admissible()
        assert apply_change(p, g) == n
        done += 1
    assert done >= 3


def test_normalize_fixed_point(q):
    p = SurfaceParams(q, (1, 2, 2, 5), (0, 1, 1, 0))
    g, n = normalize_beta(p)
    assert n == p and g == ((1, 0), (0, 1))


def test_transform_cubic_is_an_action(q, rng):
    c = tuple(Fraction(rng.randint(-5, 5)) for _ in range(4))
    A = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(1)]]
    B = [[Fraction(1), Fraction(3)], [Fraction(0), Fraction(1)]]
    AB = [[sum(A[i][k] * B[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    assert transform_cubic(transform_cubic(c, A, q), B, q) == transform_cubic(c, AB, q)


def test_s3_table_matches_matrices(q, f31):
    assert table_from_matrices(q)
    assert table_from_matrices(f31)


def test_s3_relations():
    a = (Fraction(3), Fraction(-2), Fraction(7))
    assert s3_act("sss", a) == a
    assert s3_act("rr", a) == a
    assert s3_act("rsr", a) == s3_act("ss", a)
    assert s3_act("s^2", a) == s3_act("ss", a)
    assert len(set(orbit(a))) == 6
    with pytest.raises(ValueError):
        s3_act("t", a)


def test_standard_action():
    cert = standard_action_certificate()
    assert cert["s"] and cert["r"]
    d = delta_coords((1, 2, 5))
    assert d == (8, 4, -12)


def test_invariants_on_orbits(rng):
    for _ in range(30):
        a = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(3))
        inv = moduli_invariants(a)
        assert all(moduli_invariants(s3_act(w, a)) == inv for w in S3_WORDS)
        assert orbit_equivalent(a, s3_act(rng.choice(S3_WORDS), a))


def test_orbit_equivalent_negative(rng):
    a = (Fraction(1), Fraction(2), Fraction(5))
    b = (Fraction(1), Fraction(2), Fraction(6))
    assert not orbit_equivalent(a, b)


def test_orbit_equivalent_is_quiet_when_both_methods_agree(rng):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        for _ in range(20):
            a = tuple(Fraction(rng.randint(-9, 9)) for _ in range(3))
            b = tuple(Fraction(rng.randint(-9, 9)) for _ in range(3))
            orbit_equivalent(a, b)
            orbit_equivalent(a, s3_act("rs", a))


def test_bielliptic_locus():
    assert is_bielliptic_locus((Fraction(1), Fraction(0), Fraction(3)))
    assert is_bielliptic_locus((Fraction(2), Fraction(2), Fraction(5)))   # s moves a0 into a1
    mp = moduli_point((Fraction(1), Fraction(2), Fraction(5)))
    assert mp.to_json()["invariants"] == ["0", "-112", "-384"]


def test_degenerate_beta(q):
    with pytest.raises(DegenerateError):
        normalize_beta(SurfaceParams(q, (0, 0, 0, 0), (0, 1, 0, 0)))


def test_irrational_points(q):
    # u^3 + v^3 has one rational root on P^1
    with pytest.raises(IrrationalPointsError):
        normalize_beta(SurfaceParams(q, (0, 1, 1, 0), (1, 0, 0, 1)))
