import json

import numpy as np
import pytest

from stresslab.complex import SimplicialComplex, boundary_crosspolytope, boundary_simplex, icosahedron
from stresslab.exactla import GF, QQ
from stresslab.artinian import build
from stresslab.inequalities import h_vector
from stresslab.realization import (crosspolytope_realization, from_matrix, is_proper,
                                   link_realization, project_and_height, random_realization,
                                   realization_from_json, special_realization_bad_reduction)

from conftest import P


def test_octahedron_random_is_proper():
    o = boundary_crosspolytope(3)
    for seed in range(3):
        assert random_realization(o, 3, seed).is_proper()


def test_seeded_determinism():
    t = boundary_simplex(3)
    assert random_realization(t, 3, 42) == random_realization(t, 3, 42)
    assert random_realization(t, 3, 42) != random_realization(t, 3, 43)
    assert random_realization(t, 3, 42, trial=1) != random_realization(t, 3, 42)


def test_faces_larger_than_l_check_l_subsets():
    edge = SimplicialComplex([{0, 1}])
    r = random_realization(edge, 1, 0)
    assert r.is_proper() and np.all(r.coords != 0)
    assert not from_matrix(edge, [[0, 3]]).is_proper()


def test_properness_examples():
    o = boundary_crosspolytope(3)
    assert crosspolytope_realization(o).is_proper()
    edge = SimplicialComplex([{0, 1}])
    assert not from_matrix(edge, [[1, 2], [2, 4]]).is_proper()
    c, r, tet = special_realization_bad_reduction()
    assert c.f_vector == (8, 18, 12)
    assert r.is_proper()
    assert c.intersection(tet).f_vector == (4, 6)


def test_restriction_of_proper_is_proper():
    ico = icosahedron()
    r = random_realization(ico, 3, 5)
    for v in ico.vertices[:4]:
        assert is_proper(r.restrict(ico.star({v})))


@pytest.mark.parametrize("c", [boundary_simplex(3), boundary_crosspolytope(3), icosahedron(),
                               boundary_crosspolytope(4)], ids=["tet", "oct", "ico", "cross4"])
def test_dims_equal_h_vector(c, field):
    r = random_realization(c, c.dim + 1, 3, field=field)
    assert build(c, r).dims == h_vector(c)


def test_project_octahedron_along_axis():
    o = boundary_crosspolytope(3)
    r = crosspolytope_realization(o)
    pd = project_and_height(r, [0, 0, 1])
    heights = {v: pd.height[i] for i, v in enumerate(o.vertices)}
    assert heights[4] == 1 and heights[5] == -1
    assert all(heights[v] == 0 for v in range(4))
    # stacking basis coordinates with heights recovers V
    stacked = np.vstack([pd.basis, pd.direction[None, :]])
    recon = QQ.matmul(np.linalg.inv(np.array(stacked, dtype=float)).round().astype(int).astype(object),
                      np.vstack([pd.projection.coords, pd.height[None, :]]))
    assert np.array_equal(recon, r.coords)


def test_projection_generic_and_degenerate():
    ico = icosahedron()
    r = random_realization(ico, 3, 0)
    assert project_and_height(r, [3, -7, 11]).proper
    edge = SimplicialComplex([{0, 1}])
    re = from_matrix(edge, [[1, 0], [0, 1], [0, 0]])
    assert not project_and_height(re, [1, 1, 0]).proper
    with pytest.raises(ValueError):
        project_and_height(re, [0, 0, 0])


def test_link_realization_dimension():
    o = boundary_crosspolytope(3)
    r = random_realization(o, 3, 1)
    lr = link_realization(r, 0)
    assert lr.l == 2 and lr.is_proper() and lr.complex == o.link({0})


def test_json_roundtrip(field):
    o = boundary_crosspolytope(3)
    r = random_realization(o, 3, 2, field=field)
    assert realization_from_json(o, r.to_json(), field) == r
    text = json.dumps({"vertices": {"0": ["1/2", 1], "1": [2, "-3/4"]}})
    rq = realization_from_json(SimplicialComplex([{0}, {1}]), text)
    assert rq.coords[0, 0] == QQ.convert("1/2")
    with pytest.raises(ValueError):
        realization_from_json(o, text)


def test_prime_field_sampling_uses_full_field():
    r = random_realization(boundary_simplex(3), 3, 0, field=GF(P))
    assert r.coords.max() > 10**6
