"""Artinian reductions of face rings and relative face modules.

For a complex Delta with vertex coordinates V (rows theta_1..theta_l), the
degree-k part of ``R[Delta] / Theta R[Delta]`` is the cokernel of

    M_{k-1}^l  ->  M_k,   (i, m)  ->  theta_i * m,

where M_k is the set of degree-k monomials whose support is a face.  For a
relative pair (Delta, Gamma) the spanning monomials are those whose support
is a face of Delta but not of Gamma.

Spanning monomials are ordered with non-squarefree ones first, so the
non-pivot columns of the reduced relation matrix (the quotient basis) are
squarefree whenever possible.  ``red(k)`` is the |M_k| x dim A^k matrix
taking a monomial coordinate row vector to quotient coordinates.  All
linear maps use the row-vector convention: ``coords @ matrix``.
"""
from __future__ import annotations

import itertools
from functools import cached_property

import numpy as np

from .complex import SimplicialComplex, label_key, sorted_face
from .exactla import (QQ, Field, PrimeField, Subspace, dense_nullspace, dense_rank, det,
                      subspace_sum, vstack)
from .realization import Realization, is_proper, ImproperRealizationError

MONOMIAL_CAP = 500_000


class MonomialCapError(RuntimeError):
    pass


class NotPseudomanifoldError(ValueError):
    pass


def _compositions(total: int, parts: int):
    """Positive integer tuples of length ``parts`` summing to ``total``."""
    for cuts in itertools.combinations(range(1, total), parts - 1):
        b = (0,) + cuts + (total,)
        yield tuple(b[i + 1] - b[i] for i in range(parts))


class FaceModule:
    """Graded pieces of the Artinian reduction of a (relative) face ring.

    ``gamma`` None means the absolute face ring.  Degrees 0..top are built
    (``top`` defaults to the number of linear forms).
    """

    def __init__(self, r: Realization, gamma: SimplicialComplex | None = None,
                 top: int | None = None, check: bool = True):
        if check and not is_proper(r):
            raise ImproperRealizationError("realization is not proper")
        self.realization = r
        self.complex = r.complex
        self.field: Field = r.field
        self.gamma = gamma
        self.d = r.l
        self.top = self.d if top is None else top
        c = self.complex
        self._vid = c.index
        self.n = c.n
        self._faces = {frozenset(self._vid[v] for v in f) for f in c.faces()}
        self._excluded = set()
        if gamma is not None:
            for f in gamma.faces():
                if all(v in self._vid for v in f):
                    self._excluded.add(frozenset(self._vid[v] for v in f))
        self._mono: dict[int, list[tuple]] = {}
        self._mindex: dict[int, dict[tuple, int]] = {}
        self._red: dict[int, np.ndarray] = {}
        self._basis: dict[int, list[tuple]] = {}
        for k in range(self.top + 1):
            self._build_degree(k)

    # ------------------------------------------------------------ building
    def _support(self, m: tuple) -> frozenset:
        return frozenset(i for i, e in enumerate(m) if e)

    def _monomials(self, k: int) -> list[tuple]:
        n = self.n
        out = []
        for face in self._faces:
            if face in self._excluded or len(face) > k or (k > 0 and not face):
                continue
            if k == 0:
                out.append((0,) * n)
                continue
            verts = sorted(face)
            for comp in _compositions(k, len(verts)):
                m = [0] * n
                for v, e in zip(verts, comp):
                    m[v] = e
                out.append(tuple(m))
            if len(out) > MONOMIAL_CAP:
                raise MonomialCapError(f"more than {MONOMIAL_CAP} monomials in degree {k}")
        # non-squarefree first; deterministic order inside each block
        out.sort(key=lambda m: (max(m, default=0) <= 1, sorted(self._support(m)), m))
        return out

    def _build_degree(self, k: int) -> None:
        f = self.field
        mons = self._monomials(k)
        idx = {m: i for i, m in enumerate(mons)}
        self._mono[k], self._mindex[k] = mons, idx
        ncols = len(mons)
        prev = self._mono.get(k - 1, []) if k > 0 else []
        rows = []
        if prev and ncols:
            V = self.realization.coords
            l = self.d
            rel = f.zeros((l * len(prev), ncols))
            for a, m in enumerate(prev):
                supp = self._support(m)
                for v in range(self.n):
                    if (supp | {v}) not in self._faces:
                        continue
                    mm = list(m)
                    mm[v] += 1
                    j = idx[tuple(mm)]
                    for i in range(l):
                        rel[i * len(prev) + a, j] = V[i, v]
            rows = rel
        if len(rows):
            rr, piv = f.rref(rows)
        else:
            rr, piv = f.zeros((0, ncols)), []
        pivset = set(piv)
        nonpiv = [j for j in range(ncols) if j not in pivset]
        red = f.zeros((ncols, len(nonpiv)))
        for t, j in enumerate(nonpiv):
            red[j, t] = 1 if isinstance(f, PrimeField) else f.convert(1)
        if nonpiv and len(piv):
            block = rr[:, nonpiv]
            neg = f.neg(block)
            for r_i, p in enumerate(piv):
                red[p, :] = neg[r_i]
        self._red[k] = red
        self._basis[k] = [mons[j] for j in nonpiv]

    # ------------------------------------------------------------- queries
    def dim(self, k: int) -> int:
        if k < 0 or k > self.top:
            return 0
        return len(self._basis[k])

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(self.dim(k) for k in range(self.top + 1))

    def monomials(self, k: int) -> list[tuple]:
        return list(self._mono.get(k, []))

    def basis(self, k: int) -> list[tuple]:
        return list(self._basis.get(k, []))

    def red(self, k: int) -> np.ndarray:
        return self._red[k]

    def monomial_coords(self, m: tuple) -> np.ndarray:
        """Quotient coordinates of a monomial (zero if its support is not a face)."""
        k = sum(m)
        if k > self.top:
            raise ValueError("degree above the top built degree")
        i = self._mindex[k].get(tuple(m))
        if i is None:
            supp = self._support(m)
            if supp in self._excluded:
                raise ValueError("monomial supported on the excluded subcomplex")
            return self.field.zeros(self.dim(k))
        return self._red[k][i].copy()

    def monomial(self, face_counts: dict) -> tuple:
        """Exponent tuple from a {vertex label: exponent} mapping."""
        m = [0] * self.n
        for v, e in face_counts.items():
            m[self._vid[v]] += e
        return tuple(m)

    def face_monomial(self, face) -> tuple:
        return self.monomial({v: 1 for v in face})

    def span_of_monomials(self, k: int, mons) -> Subspace:
        f = self.field
        rows = [self.monomial_coords(m) for m in mons]
        if not rows:
            return Subspace.zero(f, self.dim(k))
        return Subspace.span(f, self.dim(k), vstack(f, [np.array(rows, dtype=f.dtype)], self.dim(k)))


class GradedAlgebra(FaceModule):
    """The Artinian reduction A^*(Delta) with its multiplicative structure."""

    def __init__(self, r: Realization, top: int | None = None, check: bool = True):
        super().__init__(r, None, top, check)
        self._xcache: dict[tuple[int, int], np.ndarray] = {}
        self._tables: dict[tuple[int, int], np.ndarray] = {}

    def __repr__(self) -> str:
        return f"GradedAlgebra(dims={self.dims}, field={self.field!r})"

    # -------------------------------------------------------- multiplication
    def monomial_matrix(self, mono: tuple, k: int) -> np.ndarray:
        """Multiplication by a monomial, A^k -> A^{k+deg}."""
        f = self.field
        deg = sum(mono)
        tgt = k + deg
        out = f.zeros((self.dim(k), self.dim(tgt)))
        if tgt > self.top:
            return out
        for s, b in enumerate(self._basis[k]):
            prod = tuple(x + y for x, y in zip(b, mono))
            i = self._mindex[tgt].get(prod)
            if i is not None:
                out[s] = self._red[tgt][i]
        return out

    def x_matrix(self, u: int, k: int) -> np.ndarray:
        """Multiplication by the variable of the vertex with internal index ``u``."""
        key = (u, k)
        if key not in self._xcache:
            e = [0] * self.n
            e[u] = 1
            self._xcache[key] = self.monomial_matrix(tuple(e), k)
        return self._xcache[key]

    def linear_matrix(self, coeffs, k: int) -> np.ndarray:
        """Multiplication by sum_u coeffs[u] x_u, A^k -> A^{k+1}."""
        f = self.field
        out = f.zeros((self.dim(k), self.dim(k + 1)))
        for u, c in enumerate(coeffs):
            if c != 0:
                out = f.add(out, f.scale(c, self.x_matrix(u, k)))
        return out

    def power_matrix(self, coeffs, k: int, power: int) -> np.ndarray:
        """Multiplication by ell^power, A^k -> A^{k+power}, by iterated products."""
        f = self.field
        out = f.eye(self.dim(k))
        for j in range(power):
            out = f.matmul(out, self.linear_matrix(coeffs, k + j))
        return out

    def table(self, i: int, j: int) -> np.ndarray:
        """T[s, t, :] = coordinates of b_s * c_t for bases of A^i and A^j."""
        key = (i, j)
        if key not in self._tables:
            f = self.field
            tgt = i + j
            t = f.zeros((self.dim(i), self.dim(j), self.dim(tgt)))
            if tgt <= self.top:
                for s, b in enumerate(self._basis[i]):
                    for u, c in enumerate(self._basis[j]):
                        prod = tuple(x + y for x, y in zip(b, c))
                        idx = self._mindex[tgt].get(prod)
                        if idx is not None:
                            t[s, u] = self._red[tgt][idx]
            self._tables[key] = t
        return self._tables[key]

    def multiply(self, a: "AlgebraElement", b: "AlgebraElement") -> "AlgebraElement":
        if a.algebra is not self or b.algebra is not self:
            raise ValueError("elements of different algebras")
        tgt = a.degree + b.degree
        if tgt > self.top:
            raise ValueError(f"degree {tgt} exceeds the top degree {self.top}")
        f = self.field
        t = self.table(a.degree, b.degree)
        out = f.zeros(self.dim(tgt))
        for s in np.flatnonzero(a.coords != 0):
            row = f.matmul(b.coords, t[s]) if self.dim(b.degree) else f.zeros(self.dim(tgt))
            out = f.add(out, f.scale(a.coords[s], row))
        return AlgebraElement(self, tgt, out)

    # ------------------------------------------------------------ elements
    def element(self, k: int, coords) -> "AlgebraElement":
        return AlgebraElement(self, k, self.field.array(np.asarray(coords, dtype=object)))

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, 0, self.monomial_coords((0,) * self.n))

    def variable(self, v) -> "AlgebraElement":
        return AlgebraElement(self, 1, self.monomial_coords(self.monomial({v: 1})))

    def from_monomial(self, mono: tuple) -> "AlgebraElement":
        return AlgebraElement(self, sum(mono), self.monomial_coords(mono))

    def linear_form(self, coeffs) -> "AlgebraElement":
        f = self.field
        out = f.zeros(self.dim(1))
        for u, c in enumerate(coeffs):
            if c != 0:
                e = [0] * self.n
                e[u] = 1
                out = f.add(out, f.scale(c, self.monomial_coords(tuple(e))))
        return AlgebraElement(self, 1, out)

    def random_element(self, k: int, rng: np.random.Generator, bound: int = 10**6) -> "AlgebraElement":
        f = self.field
        if isinstance(f, PrimeField):
            c = f.random(rng, self.dim(k))
        else:
            c = f.array(rng.integers(-bound, bound + 1, size=self.dim(k)))
        return AlgebraElement(self, k, c)

    # ------------------------------------------------------------ degree map
    @cached_property
    def reference_facet(self) -> frozenset:
        facets = [f for f in self.complex.facets if len(f) == self.d]
        if not facets:
            raise NotPseudomanifoldError("no facet of full size")
        return min(facets, key=lambda f: [label_key(v) for v in sorted_face(f)])

    @cached_property
    def generator_degree(self):
        """deg of the single basis element of A^d.

        Normalised so the reference facet monomial has degree 1/|det V_ref|
        over the rationals and 1/det V_ref over a prime field.
        """
        f = self.field
        d = self.d
        if self.top < d or self.dim(d) != 1:
            raise NotPseudomanifoldError(
                f"top degree piece has dimension {self.dim(d) if self.top >= d else 0}, not 1")
        ref = self.reference_facet
        c = self.monomial_coords(self.face_monomial(ref))[0]
        if c == 0:
            raise NotPseudomanifoldError("reference facet monomial vanishes")
        D = det(f, self.realization.columns(ref))
        if isinstance(f, PrimeField):
            return f.inv(D) * f.inv(c) % f.p
        return 1 / (abs(D) * c)

    def degree_map(self, u: "AlgebraElement"):
        if u.degree != self.d:
            raise ValueError("degree map needs an element of top degree")
        f, g = self.field, self.generator_degree
        if isinstance(f, PrimeField):
            return int(u.coords[0]) * g % f.p
        return u.coords[0] * g

    def pairing_matrix(self, k: int) -> np.ndarray:
        """G[s, t] = deg(b_s c_t), bases of A^k and A^{d-k}."""
        f = self.field
        t = self.table(k, self.d - k)
        g = t[:, :, 0] if t.shape[2] else f.zeros(t.shape[:2])
        return f.scale(self.generator_degree, g) if isinstance(f, PrimeField) else g * self.generator_degree

    # ------------------------------------------------------- ideals, socle
    def ideal(self, sub: SimplicialComplex) -> "MonomialIdeal":
        return MonomialIdeal(self, sub)

    def kappa(self, sub: SimplicialComplex, i: int) -> int:
        return self.ideal(sub).dim(i)

    def socle(self, k: int) -> Subspace:
        """Elements of A^k killed by every variable."""
        f = self.field
        if self.dim(k) == 0:
            return Subspace.zero(f, 0)
        if k + 1 > self.top:
            return Subspace.full(f, self.dim(k))
        mats = [self.x_matrix(u, k) for u in range(self.n)]
        big = np.hstack(mats) if mats else f.zeros((self.dim(k), 0))
        if big.shape[1] == 0:
            return Subspace.full(f, self.dim(k))
        null = dense_nullspace(f, big.T)
        return Subspace.span(f, self.dim(k), null) if len(null) else Subspace.zero(f, self.dim(k))

    def interior_socle(self, k: int) -> Subspace:
        if k >= self.d:
            return Subspace.zero(self.field, self.dim(k))
        return self.socle(k)

    def gorenstein_quotient(self) -> "GorensteinQuotient":
        return GorensteinQuotient(self)

    def restriction_matrix(self, other: FaceModule, k: int) -> np.ndarray:
        """Map A^k(Delta) -> A^k(Delta') induced by restricting monomials."""
        f = self.field
        out = f.zeros((self.dim(k), other.dim(k)))
        for s, b in enumerate(self._basis[k]):
            labels = {self.complex.vertices[i]: e for i, e in enumerate(b) if e}
            if not all(v in other._vid for v in labels):
                continue
            m = other.monomial(labels)
            i = other._mindex[k].get(m)
            if i is not None:
                out[s] = other._red[k][i]
        return out

    def sub_algebra(self, sub: SimplicialComplex, top: int | None = None) -> "GradedAlgebra":
        """Algebra of a subcomplex with the restricted linear forms."""
        return GradedAlgebra(self.realization.restrict(sub), top=self.top if top is None else top,
                             check=False)


class AlgebraElement:
    __slots__ = ("algebra", "degree", "coords")

    def __init__(self, algebra: GradedAlgebra, degree: int, coords: np.ndarray):
        if len(coords) != algebra.dim(degree):
            raise ValueError("coordinate vector has the wrong length")
        self.algebra = algebra
        self.degree = degree
        self.coords = coords

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self.algebra.multiply(self, other)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        if other.algebra is not self.algebra or other.degree != self.degree:
            raise ValueError("can only add elements of the same degree and algebra")
        return AlgebraElement(self.algebra, self.degree, self.algebra.field.add(self.coords, other.coords))

    def scale(self, c) -> "AlgebraElement":
        return AlgebraElement(self.algebra, self.degree, self.algebra.field.scale(c, self.coords))

    def is_zero(self) -> bool:
        return not np.any(self.coords != 0)

    def __eq__(self, other) -> bool:
        return (isinstance(other, AlgebraElement) and other.algebra is self.algebra
                and other.degree == self.degree and np.array_equal(self.coords, other.coords))

    def __repr__(self) -> str:
        return f"AlgebraElement(deg={self.degree}, coords={list(self.coords)})"


class MonomialIdeal:
    """K^*(Sigma, Delta'): the span of monomials supported outside Delta'."""

    def __init__(self, algebra: GradedAlgebra, sub: SimplicialComplex):
        if not sub.is_subcomplex_of(algebra.complex):
            raise ValueError("not a subcomplex")
        self.algebra = algebra
        self.sub = sub
        self._sub_faces = {frozenset(algebra._vid[v] for v in f) for f in sub.faces()}
        self._spaces: dict[int, Subspace] = {}

    def outside(self, m: tuple) -> bool:
        return self.algebra._support(m) not in self._sub_faces

    def space(self, k: int) -> Subspace:
        if k not in self._spaces:
            a = self.algebra
            mons = [m for m in a.monomials(k) if self.outside(m)]
            self._spaces[k] = a.span_of_monomials(k, mons)
        return self._spaces[k]

    def dim(self, k: int) -> int:
        return self.space(k).dim

    def kappa(self, i: int) -> int:
        return self.dim(i)

    @cached_property
    def generators(self) -> list[tuple]:
        """Squarefree monomials of the minimal faces of Sigma outside Delta'."""
        a = self.algebra
        outside = [f for f in a._faces if f not in self._sub_faces]
        minimal = [f for f in outside if not any(g < f for g in outside)]
        mons = []
        for f in sorted(minimal, key=lambda s: (len(s), sorted(s))):
            m = [0] * a.n
            for v in f:
                m[v] = 1
            mons.append(tuple(m))
        return mons

    def annihilator(self, k: int) -> Subspace:
        """{a in A^k : a K = 0}, computed from the ideal generators."""
        a = self.algebra
        f = a.field
        mats = [a.monomial_matrix(g, k) for g in self.generators]
        mats = [m for m in mats if m.shape[1]]
        if not mats:
            return Subspace.full(f, a.dim(k))
        big = np.hstack(mats)
        null = dense_nullspace(f, big.T)
        return Subspace.span(f, a.dim(k), null) if len(null) else Subspace.zero(f, a.dim(k))


class GorensteinQuotient:
    """B^* = A^* / (socle in degrees below d) for a closed manifold."""

    def __init__(self, algebra: GradedAlgebra):
        self.algebra = algebra
        self.field = algebra.field
        self.d = algebra.d
        self._proj: dict[int, np.ndarray] = {}
        self._lift: dict[int, np.ndarray] = {}
        self._soc: dict[int, Subspace] = {}
        for k in range(algebra.top + 1):
            self._build(k)

    def _build(self, k: int) -> None:
        a, f = self.algebra, self.field
        soc = a.interior_socle(k)
        self._soc[k] = soc
        n = a.dim(k)
        piv = set(soc.pivots)
        keep = [j for j in range(n) if j not in piv]
        proj = f.zeros((n, len(keep)))
        for i in range(n):
            e = f.zeros(n)
            e[i] = 1 if isinstance(f, PrimeField) else f.convert(1)
            red = soc.reduce(e)
            proj[i] = red[keep]
        lift = f.zeros((len(keep), n))
        for t, j in enumerate(keep):
            lift[t, j] = 1 if isinstance(f, PrimeField) else f.convert(1)
        self._proj[k], self._lift[k] = proj, lift

    def dim(self, k: int) -> int:
        return self._proj[k].shape[1] if k in self._proj else 0

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(self.dim(k) for k in range(self.algebra.top + 1))

    def socle_dim(self, k: int) -> int:
        return self._soc[k].dim

    def proj(self, k: int) -> np.ndarray:
        return self._proj[k]

    def lift(self, k: int) -> np.ndarray:
        return self._lift[k]

    def pairing_matrix(self, k: int) -> np.ndarray:
        f = self.field
        p = self.algebra.pairing_matrix(k)
        return f.matmul(f.matmul(self._lift[k], p), self._lift[self.d - k].T)

    def linear_matrix(self, coeffs, k: int) -> np.ndarray:
        f = self.field
        return f.matmul(f.matmul(self._lift[k], self.algebra.linear_matrix(coeffs, k)), self._proj[k + 1])

    def power_matrix(self, coeffs, k: int, power: int) -> np.ndarray:
        f = self.field
        out = f.eye(self.dim(k))
        for j in range(power):
            out = f.matmul(out, self.linear_matrix(coeffs, k + j))
        return out

    def image(self, k: int, sub: Subspace) -> Subspace:
        """Image of a subspace of A^k in B^k."""
        f = self.field
        if sub.dim == 0:
            return Subspace.zero(f, self.dim(k))
        return Subspace.span(f, self.dim(k), f.matmul(sub.basis, self._proj[k]))


def build(c: SimplicialComplex, r: Realization, check: bool = True) -> GradedAlgebra:
    """Artinian reduction of the face ring of ``c`` by the forms of ``r``."""
    if r.complex != c:
        r = r.restrict(c)
    return GradedAlgebra(r, check=check)


def relative_module(r: Realization, gamma: SimplicialComplex | None, top: int | None = None) -> FaceModule:
    return FaceModule(r, gamma, top, check=False)


def kappa(sigma_alg: GradedAlgebra, sub: SimplicialComplex, i: int) -> int:
    return sigma_alg.kappa(sub, i)
