import pytest

from abelsurf.acceptance import reference_iota, reference_sigma, reference_tau
from abelsurf.exactring import FieldSpec, PolyRing, substitute
from abelsurf.heisenberg import (CASE_LABELS, GroupAction, classify_two_twist, derive_constraints, iota,
                                 monomial_model_check, sigma, solve_equivariant, tau)

VARS = ["x0", "x1", "x2", "y0", "y1", "y2", "z0", "z1", "z2"]


def _power(action, k, ring):
    imgs = {v: ring.var(v) for v in ring.variables}
    for _ in range(k):
        step = action.images(ring)
        imgs = {v: substitute(p, step, ring) for v, p in imgs.items()}
    return imgs


@pytest.mark.parametrize("fld", [FieldSpec.rationals_omega(), FieldSpec.prime(31)], ids=lambda f: f.label)
@pytest.mark.parametrize("gen,order", [("sigma", 3), ("iota", 2), ("tau", 3)])
@pytest.mark.parametrize("tw", [0, 1, 2])
def test_generator_orders(fld, gen, order, tw):
    ring = PolyRing(fld, VARS)
    act = GroupAction(gen, (tw, tw + 1), "xyz")
    assert act.order == order
    imgs = _power(act, order, ring)
    assert all(imgs[v] == ring.var(v) for v in VARS)


def test_heisenberg_commutator_on_the_plane(qw):
    ring = PolyRing(qw, ["x0", "x1", "x2"])
    s, t = sigma(0, "x"), tau(0, "x")
    st = s.compose(t, ring)       # x -> t(s(x))
    ts = t.compose(s, ring)
    xi = qw.omega()
    ratios = {k: None for k in st}
    for k in st:
        for c in (xi, xi * xi):
            if st[k] == ts[k] * c:
                ratios[k] = c
    assert len(set(ratios.values())) == 1 and None not in ratios.values()


def test_iota_normalises_sigma(qw):
    ring = PolyRing(qw, ["x0", "x1", "x2", "y0", "y1", "y2"])
    i, s = iota(0), sigma(0)
    lhs = i.compose(s, ring)
    rhs = _power(s, 2, ring)
    rhs = {v: substitute(p, i.images(ring), ring) for v, p in rhs.items()}
    assert lhs == rhs


def test_bad_actions():
    with pytest.raises(ValueError):
        GroupAction("rho")
    with pytest.raises(ValueError):
        GroupAction("sigma", (0,), "q")
    with pytest.raises(ValueError):
        derive_constraints(GroupAction("sigma", (0, 0), "xyz"))


@pytest.mark.parametrize("a", range(3))
def test_sigma_constraints_verbatim(a, qw):
    assert derive_constraints(sigma(a), qw).same_relations(reference_sigma(a, qw))


@pytest.mark.parametrize("b", range(2))
def test_iota_constraints(b, qw):
    derived = derive_constraints(iota(b), qw)
    assert derived.same_relations(reference_iota(b, qw, repaired=True))
    # the unrepaired fixture pairs b20 with b02, which contradicts x1^2 x0 <-> x2^2 x0
    assert not derived.same_relations(reference_iota(b, qw))


@pytest.mark.parametrize("c", range(3))
def test_tau_constraints(c, qw):
    derived = derive_constraints(tau(c), qw)
    assert derived.same_relations(reference_tau(-c, qw))
    if c == 0:
        assert derived.same_relations(reference_tau(c, qw))


def test_constraints_do_not_depend_on_the_field(qw, f31):
    for act in (sigma(1), iota(1), tau(2)):
        assert derive_constraints(act, qw).dimension == derive_constraints(act, f31).dimension


def test_untwisted_family(qw):
    fam = solve_equivariant([sigma(0), iota(0), tau(0)], qw)
    assert fam.dimension == 2
    assert set(fam.surviving()) == {"b0", "b1", "b2", "b012"}
    for v in fam.basis:
        d = dict(zip(fam.unknowns, v))
        assert d["b0"] == d["b1"] == d["b2"]


def test_twisted_families_vanish(qw):
    assert solve_equivariant([sigma(1), iota(0), tau(0)], qw).dimension == 0
    assert solve_equivariant([sigma(0), iota(1), tau(0)], qw).dimension == 0
    assert solve_equivariant([sigma(0), iota(0), tau(2)], qw).dimension == 0


@pytest.mark.parametrize("gen", ["sigma", "iota", "tau"])
def test_monomial_model(gen, qw):
    assert monomial_model_check(GroupAction(gen, (0,)), qw)


def test_two_twist_table(f31):
    table = {(m, n): classify_two_twist(m, n, f31) for m in range(3) for n in range(3)}
    assert table[(0, 0)].case == "common" and table[(0, 0)].dimension == 8
    assert {table[(0, 1)].case, table[(0, 2)].case} == {"only_c1"}
    assert {table[(1, 0)].case, table[(2, 0)].case} == {"only_c2"}
    assert {table[(1, 2)].case, table[(2, 1)].case} == {"proportional"}
    for k in (1, 2):
        assert table[(k, k)].dimension == 0
    for r in table.values():
        assert r.label == CASE_LABELS[r.case]
    prop = table[(1, 2)]
    assert prop.dimension == 4 and "residual" in prop.certificate


def test_block_twists_follow_the_scalars(f31):
    r = classify_two_twist(1, 2, f31)
    # C1 carries m, C2 carries n, C0 and C3 carry -(m + n)
    assert r.block_twists == {0: 0, 1: 1, 2: 2, 3: 0}
    assert r.surviving_blocks == (0, 3)
