"""Acceptance suite: twelve end-to-end criteria, each under a wall-clock limit.

Every test prints one line ``acceptance NN <name>: PASS|FAIL (time, limit)``.
"""
import itertools
import time
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from stresslab.artinian import build
from stresslab.complex import (boundary_crosspolytope, boundary_simplex, cycle, cyclic_polytope_boundary,
                               icosahedron, moebius_torus_7, stacked_sphere)
from stresslab.exactla import QQ, dense_rank
from stresslab.inequalities import crossing_bound, gks_check, kuhnel_check
from stresslab.lefschetz import (approximation_check, biased_pd_check, hodge_riemann_form, kappa_monotonicity_check,
                                 kazhdan_example, l_decomposable_lefschetz, lefschetz_check, perturbation_check,
                                 poincare_pairing, random_linear, random_transversal_pair)
from stresslab.realization import (TAG_ELEMENT, from_matrix, random_realization, resolve_field, rng_for,
                                   special_realization_bad_reduction)
from stresslab.rigidity import graph_corpus, is_laman, is_laman_bruteforce, lefschetz_rigidity_check
from stresslab.stress import cone_lemma_check, partition_of_unity_check, weil_duality_check
from stresslab.complex import SimplicialComplex


@pytest.fixture
def criterion(capsys):
    """Run ``body`` under a time limit and print a single verdict line."""
    def run(number: int, name: str, limit: float, body):
        t0 = time.perf_counter()
        err = None
        try:
            body()
        except AssertionError as e:
            err = e
        elapsed = time.perf_counter() - t0
        ok = err is None and elapsed < limit
        with capsys.disabled():
            print(f"\nacceptance {number:02d} {name}: {'PASS' if ok else 'FAIL'} "
                  f"({elapsed:.2f}s, limit {limit:g}s)")
        if err is not None:
            raise err
        assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"
    return run


def test_01_bad_reduction(criterion):
    def body():
        c, r, tet = special_realization_bad_reduction()
        alg = build(c, r)
        sub = c.intersection(tet)
        assert (alg.kappa(sub, 1), alg.kappa(sub, 2)) == (3, 2)
        assert not kappa_monotonicity_check(alg, sub, 1).passed
        for t in range(10):
            ell = random_linear(QQ, c.n, rng_for(0, TAG_ELEMENT, t))
            assert dense_rank(QQ, alg.linear_matrix(ell, 1)) < alg.dim(1)
    criterion(1, "bad reduction", 2, body)


def test_02_circle_biased_pd(criterion):
    def body():
        square = from_matrix(cycle(4), [[1, 0, -1, 0], [0, 1, 0, -1]])
        through_origin = SimplicialComplex([{0}, {2}])
        off_origin = SimplicialComplex([{0}, {1}])
        assert not biased_pd_check(cycle(4), through_origin, 1, realization=square).nondegenerate
        assert biased_pd_check(cycle(4), off_origin, 1, realization=square).nondegenerate
    criterion(2, "circle biased duality", 1, body)


def test_03_poincare_duality(criterion):
    def body():
        spheres = ([boundary_simplex(d) for d in range(1, 6)]
                   + [boundary_crosspolytope(d) for d in range(2, 5)]
                   + [icosahedron(), cyclic_polytope_boundary(7, 4)])
        for c in spheres:
            for seed in range(3):
                alg = build(c, random_realization(c, c.dim + 1, seed))
                for k in range(alg.d + 1):
                    rep = poincare_pairing(alg, k)
                    assert rep.nondegenerate, (c, seed, k)
    criterion(3, "Poincare duality", 30, body)


def test_04_generic_lefschetz(criterion):
    def body():
        cases = [(icosahedron(), 1, 9), (cyclic_polytope_boundary(7, 4), 1, 3),
                 (cyclic_polytope_boundary(7, 4), 2, 6), (boundary_crosspolytope(4), 1, 4),
                 (boundary_crosspolytope(4), 2, 6)]
        for c, k, rank in cases:
            cert = lefschetz_check(c, k, trials=5, seed=0, field="fp:random", recertify=True)
            assert cert.passed and cert.rank == rank and cert.recertified_q, cert.to_dict()
    criterion(4, "generic Lefschetz", 60, body)


def test_05_hall_laman(criterion):
    def body():
        c = boundary_crosspolytope(4)
        for v in c.vertices:
            star = c.star({v})
            for restriction in (("ideal", star), ("annihilator", star)):
                ok = False
                for t in range(5):
                    alg = build(c, random_realization(c, 4, 0, trial=t))
                    ell = random_linear(QQ, c.n, rng_for(0, TAG_ELEMENT, t))
                    rep = hodge_riemann_form(alg, ell, 1, restriction)
                    if rep.nondegenerate and rep.dim > 0:
                        ok = True
                        break
                assert ok, (v, restriction[0])
    criterion(5, "Hall-Laman", 60, body)


def test_06_l_decomposable(criterion):
    def body():
        for s in range(20):
            c = stacked_sphere(3, 1 + s % 7, seed=s)
            assert c.n <= 12
            cert = l_decomposable_lefschetz(c, 1, seed=s)
            assert cert.passed, (s, cert.to_dict())
    criterion(6, "L-decomposable Lefschetz", 120, body)


def test_07_duality_cone_partition(criterion):
    def body():
        spheres = ([boundary_simplex(d) for d in range(2, 6)]
                   + [boundary_crosspolytope(d) for d in range(2, 5)]
                   + [icosahedron(), cyclic_polytope_boundary(7, 4), stacked_sphere(2, 4, seed=1),
                      stacked_sphere(3, 3, seed=2)])
        fld = resolve_field("fp:random", 1)
        for c in spheres + [moebius_torus_7()]:
            r = random_realization(c, c.dim + 1, 1, field=fld)
            assert weil_duality_check(c, r).passed, c
            for v in c.vertices:
                for k in range(c.dim + 2):
                    assert cone_lemma_check(c, r, v, k).passed, (c, v, k)
            quotient = c not in spheres
            for k in range(c.dim + 1):
                assert partition_of_unity_check(c, r, k, quotient=quotient).passed, (c, k)
    criterion(7, "Weil duality, cone lemmas, partition of unity", 60, body)


def test_08_manifold_socle(criterion):
    def body():
        t = moebius_torus_7()
        alg = build(t, random_realization(t, 3, 0))
        q = alg.gorenstein_quotient()
        b1 = t.reduced_betti(1)
        assert alg.dim(2) == 10
        assert q.socle_dim(2) == 6 == comb(3, 2) * b1
        assert q.dim(1) == q.dim(2) == 4
        assert all(poincare_pairing(alg, k, quotient=True).nondegenerate for k in range(4))
    criterion(8, "manifold socle", 5, body)


def test_09_rigidity_bridge(criterion):
    def body():
        corpus = graph_corpus(max_n=8, sample=500, seed=0)
        assert len(corpus) >= 500
        for g in corpus:
            assert is_laman(g) == is_laman_bruteforce(g), g.sorted_edges()
            assert lefschetz_rigidity_check(g, seed=0).consistent, g.sorted_edges()
    criterion(9, "rigidity bridge", 120, body)


def test_10_inequalities(criterion):
    def body():
        spheres = [boundary_crosspolytope(3), icosahedron(), stacked_sphere(2, 5, seed=3)]
        for s in spheres:
            alg = build(s, random_realization(s, 3, 0, field=resolve_field("fp:random", 0)))
            for size in range(s.n + 1):
                for vs in itertools.combinations(s.vertices, size):
                    rep = gks_check(s.induced(vs).skeleton(1), 1, ambient=s, algebra=alg)
                    assert rep.passed and rep.details["agrees"], vs
        two = boundary_simplex(3).union(boundary_simplex(3).relabel({i: i + 4 for i in range(4)}))
        (tight,) = kuhnel_check(two)
        assert tight.passed and tight.lhs == tight.rhs == 4
        for fd, fd1, d in [(100, 10, 1), (61, 3, 2), (7, 1, 1)]:
            got = crossing_bound(fd, fd1, d)
            assert isinstance(got, Fraction)
            assert got == Fraction(fd ** (d + 2), (d + 3) ** (d + 2) * fd1 ** (d + 1))
        assert crossing_bound(100, 10, 1) == Fraction(625, 4)
    criterion(10, "inequalities", 30, body)


def test_11_perturbation_approximation(criterion):
    def body():
        rng = np.random.default_rng(11)
        for _ in range(200):
            a, b = random_transversal_pair(QQ, rng)
            res = perturbation_check(a, b, samples=5, rng=rng)
            assert res.passed and all(s["kernel"] for s in res.details["samples"])
        for s in range(5):
            c = stacked_sphere(2, 3 + s, seed=s)
            alg = build(c, random_realization(c, 3, s))
            res = approximation_check(alg, c.l_decomposition(), ratio=100, steps=3, tol=1e-6)
            assert res.passed, res.details
    criterion(11, "perturbation and approximation", 60, body)


def test_12_kazhdan(criterion):
    def body():
        rep = kazhdan_example(8, vectors=100, subspaces=50, max_m=4, seed=0)
        assert rep.symmetric and rep.isotropic
        assert len(rep.expansion) == 50 and rep.expands
    criterion(12, "Kazhdan example", 10, body)
