import numpy as np
import pytest

from stresslab.artinian import NotPseudomanifoldError, build
from stresslab.complex import SimplicialComplex, boundary_crosspolytope, boundary_simplex, moebius_torus_7
from stresslab.exactla import QQ, dense_rank, det
from stresslab.realization import random_realization, special_realization_bad_reduction


def alg_of(c, seed=0, field=QQ):
    return build(c, random_realization(c, c.dim + 1, seed, field=field))


@pytest.mark.parametrize("c, dims", [(boundary_simplex(3), (1, 1, 1, 1)),
                                     (boundary_crosspolytope(3), (1, 3, 3, 1)),
                                     (boundary_crosspolytope(4), (1, 4, 6, 4, 1))],
                         ids=["tet", "oct", "cross4"])
def test_dimensions(c, dims, field):
    assert alg_of(c, field=field).dims == dims


def test_unit_and_non_edge(field):
    a = alg_of(boundary_crosspolytope(3), field=field)
    rng = np.random.default_rng(0)
    for k in range(4):
        u = a.random_element(k, rng)
        assert a.one() * u == u
    # 0 and 1 are antipodal in the crosspolytope labelling
    assert not boundary_crosspolytope(3).is_face({0, 1})
    assert (a.variable(0) * a.variable(1)).is_zero()


def test_associative_and_commutative(field):
    a = alg_of(boundary_crosspolytope(3), seed=4, field=field)
    rng = np.random.default_rng(1)
    x, y, z = (a.random_element(1, rng) for _ in range(3))
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x


def test_degree_map_linear(field):
    a = alg_of(boundary_crosspolytope(3), seed=2, field=field)
    rng = np.random.default_rng(3)
    u, v = a.random_element(3, rng), a.random_element(3, rng)
    f = a.field
    assert a.degree_map(u + v) == f.add(a.degree_map(u), a.degree_map(v))
    assert a.degree_map(u.scale(f.convert(5))) == f.mul(f.convert(5), a.degree_map(u))
    assert a.degree_map(a.element(3, f.zeros(1))) == 0


def test_degree_of_reference_facet():
    a = alg_of(boundary_simplex(3), seed=7)
    ref = a.reference_facet
    d = a.degree_map(a.from_monomial(a.face_monomial(ref)))
    assert d == 1 / abs(det(QQ, a.realization.columns(ref)))


def test_not_pseudomanifold():
    c = SimplicialComplex([{0, 1, 2}, {2, 3, 4}])
    a = build(c, random_realization(c, 3, 0))
    with pytest.raises(NotPseudomanifoldError):
        a.degree_map(a.element(3, a.field.zeros(a.dim(3))))


def test_kappa_extremes():
    o = boundary_crosspolytope(3)
    a = alg_of(o)
    for i in range(4):
        assert a.kappa(o, i) == 0
    # the empty face is always present, so only degrees >= 1 are free
    assert a.kappa(SimplicialComplex(), 0) == 0
    for i in range(1, 4):
        assert a.kappa(SimplicialComplex(), i) == a.dim(i)


def test_bad_reduction_kappa():
    c, r, tet = special_realization_bad_reduction()
    a = build(c, r)
    sub = c.intersection(tet)
    assert (a.kappa(sub, 1), a.kappa(sub, 2)) == (3, 2)


def test_torus_socle_and_quotient(field):
    t = moebius_torus_7()
    a = alg_of(t, seed=1, field=field)
    assert a.dims == (1, 4, 10, 1)
    q = a.gorenstein_quotient()
    assert q.socle_dim(2) == 6
    assert q.dims == (1, 4, 4, 1)
    for k in range(4):
        g = q.pairing_matrix(k)
        assert dense_rank(q.field, g) == q.dim(k)


def test_annihilator_ideal_duality(field):
    o = boundary_crosspolytope(3)
    a = alg_of(o, seed=5, field=field)
    for sub in (o.star({0}), o.link({0}), o.induced([0, 2, 4])):
        ideal = a.ideal(sub)
        for k in range(4):
            assert ideal.annihilator(k).dim + ideal.dim(3 - k) == a.dim(k)


def test_ideal_closed_under_linear_forms():
    o = boundary_crosspolytope(3)
    a = alg_of(o, seed=6)
    ideal = a.ideal(o.star({0}))
    for k in range(3):
        sp = ideal.space(k)
        for u in range(a.n):
            img = QQ.matmul(sp.basis, a.x_matrix(u, k)) if sp.dim else None
            if img is not None:
                assert all(ideal.space(k + 1).contains(row) for row in img)
