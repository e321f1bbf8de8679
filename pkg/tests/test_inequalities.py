import csv
import io
import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from stresslab.complex import (SimplicialComplex, boundary_crosspolytope, boundary_simplex, icosahedron,
                               moebius_torus_7, stacked_sphere)
from stresslab.exactla import GF
from stresslab.inequalities import (NOT_APPLICABLE, complexity_norms, crossing_bound, crossing_formula, f_to_h,
                                    g_from_h, g_vector, gks_check, gks_manifold_bound, h_to_f, h_vector,
                                    is_m_sequence, kuhnel_check, kuhnel_complete_bound, macaulay_bound,
                                    macaulay_representation, reports_to_csv)
from stresslab.lefschetz import lefschetz_check

from conftest import P

OCT = boundary_crosspolytope(3)


def complete_graph(n):
    return SimplicialComplex(itertools.combinations(range(n), 2))


def test_f_to_h_examples():
    assert f_to_h((6, 12, 8), 3) == (1, 3, 3, 1)
    assert f_to_h((1, 6, 12, 8), 3) == (1, 3, 3, 1)
    for d in range(1, 6):
        assert h_vector(boundary_simplex(d)) == (1,) * (d + 1)
    with pytest.raises(ValueError):
        f_to_h((1, 2), 3)


@given(st.integers(1, 6).flatmap(lambda d: st.tuples(st.just(d),
                                                      st.lists(st.integers(0, 500), min_size=d, max_size=d))))
def test_h_to_f_round_trip(args):
    d, f = args
    assert h_to_f(f_to_h(f, d), d) == tuple(f)


def test_dehn_sommerville_on_spheres():
    for c in (OCT, icosahedron(), boundary_crosspolytope(4), stacked_sphere(3, 4, seed=0)):
        h = h_vector(c)
        assert h == h[::-1]


@pytest.mark.parametrize("c, g", [(boundary_simplex(3), (1, 0)), (OCT, (1, 2)), (icosahedron(), (1, 8))],
                         ids=["tet", "oct", "ico"])
def test_g_vector(c, g):
    cert = lefschetz_check(c, 1, seed=2, field=GF(P))
    assert g_vector(c, cert) == g == g_from_h(h_vector(c))


def test_g_vector_needs_passing_certificate():
    from stresslab.realization import special_realization_bad_reduction
    c, r, _ = special_realization_bad_reduction()
    cert = lefschetz_check(c, 1, trials=1, realization=r)
    with pytest.raises(ValueError):
        g_vector(c, cert, realization=r)


def test_g_vectors_are_m_sequences():
    for c in (OCT, icosahedron(), boundary_crosspolytope(4), stacked_sphere(3, 5, seed=1)):
        cert = lefschetz_check(c, 1, seed=0, field=GF(P))
        g = g_vector(c, cert)
        assert all(x >= 0 for x in g) and is_m_sequence(g)


def test_macaulay():
    assert is_m_sequence((1, 0, 0))
    assert is_m_sequence((1, 3, 6))
    assert not is_m_sequence((1, 2, 4))
    assert macaulay_bound(2, 1) == 3
    assert macaulay_representation(5, 2) == [(3, 2), (2, 1)]
    assert not is_m_sequence((1, 0, 1))
    assert not is_m_sequence((2, 1))


@given(st.integers(0, 2000), st.integers(1, 6))
def test_macaulay_representation_sums(a, i):
    from math import comb
    rep = macaulay_representation(a, i)
    assert sum(comb(n, j) for n, j in rep) == a
    ns = [n for n, _ in rep]
    assert ns == sorted(ns, reverse=True) and len(set(ns)) == len(ns)


def test_gks_examples():
    rep = gks_check(complete_graph(5), 1)
    assert rep.passed and (rep.lhs, rep.rhs) == (10, 15)
    # planar triangulation: e = 3n - 6, so slack is 6
    ico_graph = icosahedron().skeleton(1)
    rep = gks_check(ico_graph, 1)
    assert rep.passed and rep.slack == 6
    with pytest.raises(ValueError):
        gks_check(icosahedron(), 1)


def test_gks_kappa_derivation_on_octahedron():
    for size in range(7):
        for vs in itertools.combinations(range(6), size):
            sub = OCT.induced(vs).skeleton(1)
            rep = gks_check(sub, 1, ambient=OCT, seed=1, field=GF(P))
            assert rep.passed and rep.details["agrees"], (vs, rep.details)


def test_gks_manifold_bound():
    t = moebius_torus_7()
    rep = gks_manifold_bound(t.skeleton(1), t, 1)
    assert rep.passed and (rep.lhs, rep.rhs) == (21, 27)
    sphere = gks_manifold_bound(OCT.skeleton(1), OCT, 1)
    assert sphere.rhs == gks_check(OCT.skeleton(1), 1).rhs


def test_gks_manifold_torus_subcomplexes():
    t = moebius_torus_7()
    for size in range(8):
        for vs in itertools.combinations(range(7), size):
            assert gks_manifold_bound(t.induced(vs).skeleton(1), t, 1).passed


def test_kuhnel():
    (rep,) = kuhnel_check(moebius_torus_7())
    assert rep.passed and (rep.lhs, rep.rhs) == (0, 3)
    two = boundary_simplex(3).union(boundary_simplex(3).relabel({i: i + 4 for i in range(4)}))
    (tight,) = kuhnel_check(two)
    assert tight.passed and tight.lhs == tight.rhs == 4
    (hyp,) = kuhnel_check(two, n=7)
    assert not hyp.passed and (hyp.lhs, hyp.rhs) == (4, 3)


def test_kuhnel_complete():
    assert kuhnel_complete_bound(2, 1, 0).passed
    assert not kuhnel_complete_bound(4, 1, 0).passed
    verdicts = [kuhnel_complete_bound(n, 1, 2, offset=2).passed for n in range(3, 12)]
    # the conjectured form: C(n-3, 2) <= 6, so n <= 7
    assert verdicts == [n <= 7 for n in range(3, 12)]
    with_offset_one = [kuhnel_complete_bound(n, 1, 2).passed for n in range(3, 12)]
    assert with_offset_one == [n <= 6 for n in range(3, 12)]
    first_fail = with_offset_one.index(False)
    assert not any(with_offset_one[first_fail:])


def test_crossing():
    assert crossing_bound(100, 10, 1) == Fraction(625, 4) == Fraction(3125, 20)
    assert crossing_bound(40, 10, 1) == NOT_APPLICABLE
    assert crossing_formula(40, 10, 1) == 10
    assert crossing_bound(5, 0, 1) == NOT_APPLICABLE


def test_norms_octahedron():
    rep = complexity_norms(OCT, 1, g_k=2)
    assert rep.mode == "exact" and rep.samples == 63
    assert rep.inf_norm == 1 and rep.bound_ok
    # disconnected induced subgraphs of the octahedron are the 3 antipodal pairs
    assert rep.one_norm[2] == 3 and rep.one_norm[1] == 0


def test_norms_tetrahedron():
    rep = complexity_norms(boundary_simplex(3), 1, g_k=0)
    assert rep.inf_norm == 0 and rep.bound_ok


def test_sampled_mode_consistent():
    exact = complexity_norms(icosahedron(), 1)
    sampled = complexity_norms(icosahedron(), 1, exact_cutoff=5, sample_budget=400, seed=3)
    assert sampled.mode == "sampled" and sampled.inf_norm <= exact.inf_norm
    for m, v in sampled.one_norm.items():
        assert v >= 0
        if exact.one_norm[m] == 0:
            assert v == 0


def test_csv_export():
    rows = [gks_check(complete_graph(5), 1)] + kuhnel_check(moebius_torus_7())
    text = reports_to_csv(rows)
    parsed = list(csv.DictReader(io.StringIO(text)))
    assert [r["name"] for r in parsed] == ["gks", "kuhnel"]
    assert parsed[0]["slack"] == "5"
