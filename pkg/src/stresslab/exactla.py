"""Exact scalar fields, sparse matrices and subspaces.

Two fields are supported: the rationals (``QQ``, backed by gmpy2 ``mpq``)
and prime fields ``GF(p)`` with ``2**20 < p < 2**31``.  Dense arrays are the
working representation: ``int64`` for prime fields and ``object`` arrays of
``mpq`` for the rationals.  :class:`SparseMatrix` and :class:`Subspace` are
the immutable public value types.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Integral, Rational
from typing import Iterable

import gmpy2
import numpy as np
from gmpy2 import mpq
from sympy import isprime, nextprime

from . import _kernels

DENSE_CUTOFF = 200


class FieldMismatchError(ValueError):
    """Operands live over different fields or carry foreign scalars."""


class DimensionMismatchError(ValueError):
    pass


class PrimeField:
    """The field with ``p`` elements, ``2**20 < p < 2**31``."""

    dtype = np.int64

    def __init__(self, p: int):
        p = int(p)
        if not (2**20 < p < _kernels.MAX_PRIME) or not isprime(p):
            raise ValueError(f"need a prime in (2^20, 2^31), got {p}")
        self.p = p

    @property
    def name(self) -> str:
        return f"fp:{self.p}"

    def __repr__(self) -> str:
        return f"GF({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("GF", self.p))

    # scalars
    def convert(self, x) -> int:
        if isinstance(x, (Integral, np.integer)) or type(x) is type(gmpy2.mpz(0)):
            return int(x) % self.p
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, (Rational,)) or type(x) is type(mpq(0)):
            num, den = int(x.numerator), int(x.denominator)
            if den % self.p == 0:
                raise ZeroDivisionError(f"denominator {den} vanishes mod {self.p}")
            return num * pow(den, -1, self.p) % self.p
        raise TypeError(f"cannot map {type(x).__name__} into {self!r}")

    def inv(self, x) -> int:
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, -1, self.p)

    def to_str(self, x) -> str:
        return str(int(x))

    # arrays
    def array(self, data) -> np.ndarray:
        arr = np.asarray(data, dtype=object)
        if arr.size == 0:
            return np.zeros(arr.shape, dtype=np.int64)
        out = np.vectorize(self.convert, otypes=[np.int64])(arr)
        return out.astype(np.int64)

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def reduce(self, a: np.ndarray) -> np.ndarray:
        return np.asarray(a, dtype=np.int64) % self.p

    def neg(self, a: np.ndarray) -> np.ndarray:
        return (-np.asarray(a, dtype=np.int64)) % self.p

    def add(self, a, b) -> np.ndarray:
        return (np.asarray(a, dtype=np.int64) + b) % self.p

    def scale(self, c, a) -> np.ndarray:
        return (np.asarray(a, dtype=np.int64) * (int(c) % self.p)) % self.p

    def mul(self, a, b) -> np.ndarray:
        """Elementwise product."""
        return (np.asarray(a, dtype=np.int64) * np.asarray(b, dtype=np.int64)) % self.p

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if a.ndim == 1:
            return self.matmul(a[None, :], b)[0]
        if b.ndim == 1:
            return self.matmul(a, b[:, None])[:, 0]
        if 0 in a.shape or 0 in b.shape:
            return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        return _kernels.matmul_mod_p(a, b, self.p)

    def rref(self, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
        a = np.asarray(a, dtype=np.int64)
        if a.ndim != 2:
            raise ValueError("rref needs a 2-d array")
        if a.size == 0:
            return np.zeros((0, a.shape[1]), dtype=np.int64), []
        rows, piv = _kernels.rref_mod_p(a, self.p)
        return rows, [int(c) for c in piv]

    def random(self, rng: np.random.Generator, size) -> np.ndarray:
        return rng.integers(0, self.p, size=size, dtype=np.int64)

    # shared helpers
    rank = None  # replaced below
    nullspace = None


class RationalField:
    """Exact rationals; dense elimination below a size cutoff, sparse above."""

    name = "q"
    dtype = object

    def __repr__(self) -> str:
        return "QQ"

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("QQ")

    def convert(self, x):
        if isinstance(x, str):
            return mpq(Fraction(x.strip()))
        if isinstance(x, (Integral, np.integer)):
            return mpq(int(x))
        if isinstance(x, Rational) or type(x) is type(mpq(0)) or type(x) is type(gmpy2.mpz(0)):
            return mpq(x)
        raise TypeError(f"cannot map {type(x).__name__} into QQ")

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / mpq(x)

    def to_str(self, x) -> str:
        x = mpq(x)
        return str(int(x.numerator)) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def array(self, data) -> np.ndarray:
        arr = np.asarray(data, dtype=object)
        out = np.empty(arr.shape, dtype=object)
        for idx in np.ndindex(arr.shape):
            out[idx] = self.convert(arr[idx])
        return out

    def zeros(self, shape) -> np.ndarray:
        out = np.empty(shape, dtype=object)
        out.fill(mpq(0))
        return out

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = mpq(1)
        return out

    def reduce(self, a):
        return a

    def neg(self, a):
        return -np.asarray(a, dtype=object)

    def add(self, a, b):
        return np.asarray(a, dtype=object) + b

    def scale(self, c, a):
        return np.asarray(a, dtype=object) * mpq(c)

    def mul(self, a, b):
        return np.asarray(a, dtype=object) * np.asarray(b, dtype=object)

    def matmul(self, a, b):
        a = np.asarray(a, dtype=object)
        b = np.asarray(b, dtype=object)
        if a.ndim == 1:
            return self.matmul(a[None, :], b)[0]
        if b.ndim == 1:
            return self.matmul(a, b[:, None])[:, 0]
        if 0 in a.shape or 0 in b.shape:
            return self.zeros((a.shape[0], b.shape[1]))
        return np.dot(a, b)

    def rref(self, a) -> tuple[np.ndarray, list[int]]:
        a = np.asarray(a, dtype=object)
        if a.ndim != 2:
            raise ValueError("rref needs a 2-d array")
        if a.size == 0:
            return self.zeros((0, a.shape[1])), []
        if max(a.shape) < DENSE_CUTOFF:
            return _rref_dense_q(a, self)
        return _rref_sparse_q(a, self)

    def random(self, rng: np.random.Generator, size, bound: int = 10**6) -> np.ndarray:
        vals = rng.integers(-bound, bound + 1, size=size)
        return self.array(vals)


def _rref_dense_q(a: np.ndarray, field: RationalField):
    a = a.copy()
    nrows, ncols = a.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c] != 0)
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = a[r] * (1 / mpq(a[r, c]))
        col = a[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col != 0)
        if rows.size:
            a[rows] = a[rows] - np.outer(col[rows], a[r])
        pivots.append(c)
        r += 1
    return a[:r], pivots


def _rref_sparse_q(a: np.ndarray, field: RationalField):
    """Sparse elimination on dict rows.

    Columns are processed left to right so the result is the canonical
    RREF; within a column the pivot row is the one with fewest nonzeros
    (Markowitz choice for a fixed column order).
    """
    nrows, ncols = a.shape
    rows: list[dict[int, object]] = []
    col_rows: dict[int, set[int]] = {}
    for i in range(nrows):
        nz = np.flatnonzero(a[i] != 0)
        row = {int(j): mpq(a[i, j]) for j in nz}
        rows.append(row)
        for j in row:
            col_rows.setdefault(j, set()).add(i)
    active = set(range(nrows))
    pivot_rows: list[tuple[int, dict]] = []
    for c in range(ncols):
        cand = [i for i in col_rows.get(c, ()) if i in active]
        if not cand:
            continue
        i = min(cand, key=lambda t: (len(rows[t]), t))
        active.discard(i)
        piv = rows[i]
        inv = 1 / mpq(piv[c])
        for j in piv:
            piv[j] = piv[j] * inv
        for t in cand:
            if t == i:
                continue
            row = rows[t]
            f = row[c]
            for j, v in piv.items():
                nv = row.get(j, 0) - f * v
                if nv == 0:
                    if j in row:
                        del row[j]
                        col_rows[j].discard(t)
                else:
                    if j not in row:
                        col_rows.setdefault(j, set()).add(t)
                    row[j] = nv
        for j in piv:
            col_rows[j].discard(i)
        pivot_rows.append((c, piv))
    # back substitution
    for idx in range(len(pivot_rows) - 1, -1, -1):
        c, piv = pivot_rows[idx]
        for jdx in range(idx):
            row = pivot_rows[jdx][1]
            f = row.get(c)
            if f is None or f == 0:
                continue
            for j, v in piv.items():
                nv = row.get(j, 0) - f * v
                if nv == 0:
                    row.pop(j, None)
                else:
                    row[j] = nv
    out = field.zeros((len(pivot_rows), ncols))
    for r, (c, row) in enumerate(pivot_rows):
        for j, v in row.items():
            out[r, j] = v
    return out, [c for c, _ in pivot_rows]


QQ = RationalField()
Field = PrimeField | RationalField


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def random_prime(rng: np.random.Generator) -> int:
    """A prime in [2^30, 2^31) drawn from ``rng``."""
    base = int(rng.integers(2**30, 2**31 - 2**20))
    return int(nextprime(base))


def parse_field(spec: str, rng: np.random.Generator | None = None) -> Field:
    spec = spec.strip().lower()
    if spec in ("q", "qq", "rational"):
        return QQ
    if spec.startswith("fp:"):
        arg = spec[3:]
        if arg == "random":
            if rng is None:
                rng = np.random.default_rng(0)
            return PrimeField(random_prime(rng))
        return PrimeField(int(arg))
    raise ValueError(f"unknown field {spec!r}; use q, fp:<prime> or fp:random")


# --------------------------------------------------------------------------
# dense helpers shared by both fields
# --------------------------------------------------------------------------

def dense_rank(field: Field, a) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(field.rref(a)[1])


def dense_nullspace(field: Field, a) -> np.ndarray:
    """Basis rows (canonical RREF) of the right kernel of ``a``."""
    a = np.asarray(a)
    ncols = a.shape[1]
    if a.shape[0] == 0:
        return field.eye(ncols)
    r, piv = field.rref(a)
    free = [j for j in range(ncols) if j not in set(piv)]
    out = field.zeros((len(free), ncols))
    for t, f in enumerate(free):
        out[t, f] = field.convert(1)
        for i, c in enumerate(piv):
            out[t, c] = field.neg(r[i, f]) if isinstance(field, PrimeField) else -r[i, f]
    if len(free) == 0:
        return out
    return field.rref(out)[0]


def dense_left_nullspace(field: Field, a) -> np.ndarray:
    """Basis rows ``y`` with ``y @ a == 0``."""
    a = np.asarray(a)
    return dense_nullspace(field, a.T)


PrimeField.rank = dense_rank
PrimeField.nullspace = dense_nullspace
RationalField.rank = dense_rank
RationalField.nullspace = dense_nullspace


def vstack(field: Field, blocks: Iterable[np.ndarray], ncols: int) -> np.ndarray:
    blocks = [np.asarray(b) for b in blocks if np.asarray(b).shape[0]]
    if not blocks:
        return field.zeros((0, ncols))
    if field is QQ:
        return np.vstack([b.astype(object) for b in blocks])
    return np.vstack(blocks).astype(np.int64)


# --------------------------------------------------------------------------
# public value types
# --------------------------------------------------------------------------

class SparseMatrix:
    """Immutable sparse matrix of (row, column, value) triples over a field."""

    __slots__ = ("nrows", "ncols", "field", "_entries")

    def __init__(self, nrows: int, ncols: int, entries, field: Field):
        self.nrows = int(nrows)
        self.ncols = int(ncols)
        self.field = field
        store: dict[tuple[int, int], object] = {}
        for i, j, v in entries:
            i, j = int(i), int(j)
            if not (0 <= i < self.nrows and 0 <= j < self.ncols):
                raise IndexError(f"entry ({i}, {j}) outside {self.nrows}x{self.ncols}")
            if (i, j) in store:
                raise ValueError(f"duplicate entry at ({i}, {j})")
            v = _checked_scalar(field, v)
            if v != 0:
                store[(i, j)] = v
        self._entries = store

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @classmethod
    def from_dense(cls, data, field: Field) -> "SparseMatrix":
        arr = np.asarray(data, dtype=object)
        if arr.ndim != 2:
            raise ValueError("expected a 2-d array")
        arr = field.array(arr)
        entries = [(i, j, arr[i, j]) for i, j in zip(*np.nonzero(arr != 0))]
        return cls(arr.shape[0], arr.shape[1], entries, field)

    def to_dense(self) -> np.ndarray:
        out = self.field.zeros((self.nrows, self.ncols))
        for (i, j), v in self._entries.items():
            out[i, j] = v
        return out

    def triples(self) -> list[tuple[int, int, object]]:
        return [(i, j, v) for (i, j), v in sorted(self._entries.items())]

    @property
    def nnz(self) -> int:
        return len(self._entries)

    @property
    def T(self) -> "SparseMatrix":
        return SparseMatrix(self.ncols, self.nrows,
                            [(j, i, v) for (i, j), v in self._entries.items()], self.field)

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        _same_field(self.field, other.field)
        if self.ncols != other.nrows:
            raise DimensionMismatchError(f"{self.shape} @ {other.shape}")
        prod = self.field.matmul(self.to_dense(), other.to_dense())
        return SparseMatrix.from_dense(prod, self.field)

    def __eq__(self, other) -> bool:
        return (isinstance(other, SparseMatrix) and self.field == other.field
                and self.shape == other.shape and self._entries == other._entries)

    def __hash__(self):
        return hash((self.shape, self.field, frozenset(self._entries.items())))

    def __repr__(self) -> str:
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz}, {self.field!r})"


def _checked_scalar(field: Field, v):
    if isinstance(field, PrimeField):
        if isinstance(v, (bool, float)) or not isinstance(v, (Integral, np.integer)):
            raise FieldMismatchError(f"{type(v).__name__} entry in a {field!r} matrix")
        return int(v) % field.p
    if isinstance(v, float):
        raise FieldMismatchError("floating-point entry in an exact matrix")
    return field.convert(v)


def _same_field(a: Field, b: Field) -> None:
    if a != b:
        raise FieldMismatchError(f"mixed fields {a!r} and {b!r}")


class Subspace:
    """A subspace of ``field^ambient`` held by its canonical RREF basis rows.

    ``columns`` exposes the same basis as a column-reduced matrix.
    """

    __slots__ = ("field", "ambient", "basis", "pivots")

    def __init__(self, field: Field, ambient: int, basis: np.ndarray, pivots: list[int]):
        self.field = field
        self.ambient = int(ambient)
        self.basis = basis
        self.pivots = tuple(pivots)

    @classmethod
    def span(cls, field: Field, ambient: int, vectors) -> "Subspace":
        vectors = np.asarray(vectors, dtype=field.dtype) if len(vectors) else field.zeros((0, ambient))
        if vectors.ndim == 1:
            vectors = vectors[None, :]
        if vectors.shape[1] != ambient:
            raise DimensionMismatchError(f"vectors of length {vectors.shape[1]} in ambient {ambient}")
        if vectors.shape[0] == 0:
            return cls.zero(field, ambient)
        rows, piv = field.rref(vectors)
        return cls(field, ambient, rows, piv)

    @classmethod
    def zero(cls, field: Field, ambient: int) -> "Subspace":
        return cls(field, ambient, field.zeros((0, ambient)), [])

    @classmethod
    def full(cls, field: Field, ambient: int) -> "Subspace":
        return cls(field, ambient, field.eye(ambient), list(range(ambient)))

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @property
    def columns(self) -> SparseMatrix:
        return SparseMatrix.from_dense(self.basis.T, self.field)

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=self.field.dtype)
        return bool(not np.any(self.reduce(v) != 0))

    def reduce(self, v) -> np.ndarray:
        """Remainder of ``v`` after clearing the pivot coordinates."""
        v = np.array(v, dtype=self.field.dtype, copy=True)
        for r, c in enumerate(self.pivots):
            f = v[c]
            if f != 0:
                v = self.field.add(v, self.field.neg(self.field.scale(f, self.basis[r])))
        return v

    def coordinates(self, v) -> np.ndarray:
        """Coefficients of ``v`` in the basis; ``v`` must lie in the subspace."""
        if not self.contains(v):
            raise ValueError("vector not in subspace")
        v = np.asarray(v, dtype=self.field.dtype)
        return v[list(self.pivots)] if self.pivots else self.field.zeros(0)

    def annihilator(self) -> "Subspace":
        """Vectors orthogonal to every basis row under the standard dot product."""
        if self.dim == 0:
            return Subspace.full(self.field, self.ambient)
        null = dense_nullspace(self.field, self.basis)
        return Subspace(self.field, self.ambient, null, _pivots_of(null))

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subspace) and self.field == other.field
                and self.ambient == other.ambient and self.pivots == other.pivots
                and np.array_equal(self.basis, other.basis))

    def __hash__(self):
        return hash((self.field, self.ambient, self.pivots))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient}, {self.field!r})"


def _pivots_of(rref_rows: np.ndarray) -> list[int]:
    out = []
    for row in rref_rows:
        nz = np.flatnonzero(row != 0)
        out.append(int(nz[0]))
    return out


def rank(m: SparseMatrix) -> int:
    """Exact rank of ``m`` over its field."""
    if not isinstance(m, SparseMatrix):
        raise TypeError("rank expects a SparseMatrix")
    if m.nnz == 0:
        return 0
    return dense_rank(m.field, m.to_dense())


def kernel(m: SparseMatrix) -> Subspace:
    """Right null space of ``m``."""
    if m.nnz == 0:
        return Subspace.full(m.field, m.ncols)
    null = dense_nullspace(m.field, m.to_dense())
    return Subspace(m.field, m.ncols, null, _pivots_of(null))


def _check_pair(a: Subspace, b: Subspace) -> None:
    _same_field(a.field, b.field)
    if a.ambient != b.ambient:
        raise DimensionMismatchError(f"ambient dimensions {a.ambient} and {b.ambient}")


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_pair(a, b)
    return Subspace.span(a.field, a.ambient, vstack(a.field, [a.basis, b.basis], a.ambient))


def intersect(a: Subspace, b: Subspace) -> Subspace:
    _check_pair(a, b)
    return subspace_sum(a.annihilator(), b.annihilator()).annihilator()


def orthogonal_complement(a: Subspace, gram: SparseMatrix) -> Subspace:
    """``{y : x^T G y = 0 for all x in a}`` for a symmetric Gram matrix ``G``."""
    _same_field(a.field, gram.field)
    if gram.nrows != gram.ncols or gram.nrows != a.ambient:
        raise DimensionMismatchError("gram must be square of the ambient size")
    g = gram.to_dense()
    if not np.array_equal(g, g.T):
        raise ValueError("gram matrix is not symmetric")
    if a.dim == 0:
        return Subspace.full(a.field, a.ambient)
    m = a.field.matmul(a.basis, g)
    null = dense_nullspace(a.field, m)
    return Subspace(a.field, a.ambient, null, _pivots_of(null))


def to_fraction(field: Field, x) -> Fraction:
    if field is QQ or isinstance(field, RationalField):
        x = mpq(x)
        return Fraction(int(x.numerator), int(x.denominator))
    return Fraction(int(x))


def det(field: Field, a) -> object:
    """Determinant of a square matrix by elimination."""
    a = np.array(a, dtype=field.dtype, copy=True)
    n = a.shape[0]
    if a.shape != (n, n):
        raise DimensionMismatchError("det needs a square matrix")
    prime = isinstance(field, PrimeField)
    out = 1 if prime else mpq(1)
    for c in range(n):
        nz = np.flatnonzero(a[c:, c] != 0)
        if nz.size == 0:
            return 0 if prime else mpq(0)
        i = c + int(nz[0])
        if i != c:
            a[[c, i]] = a[[i, c]]
            out = -out
        piv = a[c, c]
        out = (out * int(piv)) % field.p if prime else out * piv
        inv = field.inv(piv)
        for j in range(c + 1, n):
            f = a[j, c]
            if f != 0:
                if prime:
                    a[j] = (a[j] - (int(f) * inv % field.p) * a[c]) % field.p
                else:
                    a[j] = a[j] - (f * inv) * a[c]
    return out % field.p if prime else out
