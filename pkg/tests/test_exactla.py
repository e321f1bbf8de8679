from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st
from gmpy2 import mpq

from stresslab.exactla import (GF, QQ, DimensionMismatchError, FieldMismatchError, PrimeField, SparseMatrix,
                               Subspace, dense_rank, det, intersect, kernel, orthogonal_complement,
                               parse_field, random_prime, rank, subspace_sum)
from stresslab.realization import rng_for

from conftest import P


def sm(rows, field):
    return SparseMatrix.from_dense(np.array(rows, dtype=object), field)


def sympy_rank(rows) -> int:
    return sympy.Matrix(rows).rank()


def test_rank_small_cases(field):
    assert rank(sm([[0] * 3] * 3, field)) == 0
    assert rank(sm(np.eye(3, dtype=int).tolist(), field)) == 3
    assert rank(sm([[1, 2, 3], [2, 4, 6]], field)) == 1


def test_kernel_of_row_vector(field):
    k = kernel(sm([[1, 1]], field))
    assert k.dim == 1
    v = k.basis[0]
    assert v[0] == 1 and v[1] == field.convert(-1)


def test_kernel_of_identity_is_zero(field):
    assert kernel(sm(np.eye(4, dtype=int).tolist(), field)).dim == 0


@pytest.mark.parametrize("seed", range(10))
def test_kernel_random_against_sympy(field, seed):
    rng = np.random.default_rng(seed)
    r = int(rng.integers(0, 6))
    m = (rng.integers(-4, 5, size=(5, r)) @ rng.integers(-4, 5, size=(r, 8))).tolist()
    want = sympy_rank(m)
    mat = sm(m, field)
    assert rank(mat) == want
    k = kernel(mat)
    assert k.dim == 8 - want
    if k.dim:
        assert not np.any(field.matmul(mat.to_dense(), k.basis.T) != 0)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-20, 20), min_size=4, max_size=4), min_size=1, max_size=6))
def test_rank_transpose_and_backends_agree(rows):
    a = sm(rows, QQ)
    b = sm(rows, GF(P))
    assert rank(a) == rank(a.T) == sympy_rank(rows)
    # entries are tiny, so reduction mod a large prime keeps the rank
    assert rank(b) == rank(a)


def test_subspace_lattice_basic(field):
    e1 = Subspace.span(field, 2, field.array(np.array([[1, 0]], dtype=object)))
    e2 = Subspace.span(field, 2, field.array(np.array([[0, 1]], dtype=object)))
    assert intersect(e1, e2).dim == 0
    assert subspace_sum(e1, e2) == Subspace.full(field, 2)
    assert intersect(e1, e1) == e1 == subspace_sum(e1, e1)


@pytest.mark.parametrize("seed", range(8))
def test_dimension_formula_random(field, seed):
    rng = np.random.default_rng(100 + seed)
    a = Subspace.span(field, 10, field.array(rng.integers(-3, 4, size=(int(rng.integers(1, 8)), 10)).astype(object)))
    b = Subspace.span(field, 10, field.array(rng.integers(-3, 4, size=(int(rng.integers(1, 8)), 10)).astype(object)))
    assert intersect(a, b).dim + subspace_sum(a, b).dim == a.dim + b.dim
    stacked = dense_rank(field, np.vstack([a.basis, b.basis]))
    assert subspace_sum(a, b).dim == stacked


def test_canonical_form_equality(field):
    v = field.array(np.array([[1, 2, 3], [0, 1, 1]], dtype=object))
    w = field.array(np.array([[1, 3, 4], [2, 5, 7]], dtype=object))  # same row space
    assert Subspace.span(field, 3, v) == Subspace.span(field, 3, w)


def test_orthogonal_complement_standard_form(field):
    a = Subspace.span(field, 3, field.array(np.array([[1, 1, 0]], dtype=object)))
    gram = sm(np.eye(3, dtype=int).tolist(), field)
    oc = orthogonal_complement(a, gram)
    assert oc.dim == 2
    assert not np.any(field.matmul(oc.basis, a.basis.T) != 0)


def test_orthogonal_complement_rejects_asymmetric(field):
    a = Subspace.full(field, 2)
    with pytest.raises(ValueError):
        orthogonal_complement(a, sm([[1, 1], [0, 1]], field))


def test_dimension_mismatch(field):
    with pytest.raises(DimensionMismatchError):
        intersect(Subspace.full(field, 2), Subspace.full(field, 3))
    with pytest.raises(DimensionMismatchError):
        sm([[1, 2]], field) @ sm([[1, 2]], field)


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatchError):
        sm([[1]], QQ) @ sm([[1]], GF(P))


def test_sparse_invariants():
    m = SparseMatrix(2, 2, [(0, 0, 1), (1, 1, 0)], QQ)
    assert m.nnz == 1  # zeros are not stored
    with pytest.raises(IndexError):
        SparseMatrix(2, 2, [(2, 0, 1)], QQ)
    with pytest.raises(ValueError):
        SparseMatrix(2, 2, [(0, 0, 1), (0, 0, 2)], QQ)
    with pytest.raises(FieldMismatchError):
        SparseMatrix(1, 1, [(0, 0, 0.5)], QQ)
    with pytest.raises(FieldMismatchError):
        SparseMatrix(1, 1, [(0, 0, Fraction(1, 2))], GF(P))


def test_rational_arithmetic_stays_exact():
    m = sm([[3, 1], [1, 3]], QQ)
    k = kernel(SparseMatrix.from_dense(QQ.array(np.array([[mpq(1, 3), mpq(1, 7)]], dtype=object)), QQ))
    assert k.basis[0][0] == 1 and k.basis[0][1] == mpq(-7, 3)  # x/3 + y/7 = 0
    assert all(type(x) is type(mpq(1)) for x in k.basis.ravel())
    assert det(QQ, m.to_dense()) == 8


def test_prime_field_bounds():
    with pytest.raises(ValueError):
        PrimeField(101)
    with pytest.raises(ValueError):
        PrimeField(2**31 + 11)
    with pytest.raises(ValueError):
        PrimeField(2**30)  # not prime
    p = random_prime(rng_for(3, 5))
    assert 2**30 <= p < 2**31 and sympy.isprime(p)


def test_parse_field():
    assert parse_field("q") is QQ
    assert parse_field(f"fp:{P}") == GF(P)
    f = parse_field("fp:random", rng_for(1, 5))
    assert isinstance(f, PrimeField) and f.name.startswith("fp:")
    with pytest.raises(ValueError):
        parse_field("reals")


def test_large_sparse_rational_path():
    # above the dense cutoff the sparse elimination runs
    n = 230
    rng = np.random.default_rng(7)
    rows = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        rows[i, i] = 1 + int(rng.integers(0, 3))
        rows[i, (i * 7 + 3) % n] += int(rng.integers(-2, 3))
    rows[-1] = rows[0] + rows[1]
    a = sm(rows.tolist(), QQ)
    b = sm(rows.tolist(), GF(P))
    assert rank(a) == rank(b) == n - 1
    k = kernel(a)
    assert k.dim == 1
    assert not np.any(QQ.matmul(a.to_dense(), k.basis.T) != 0)
