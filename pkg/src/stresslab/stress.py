"""Stress spaces, Minkowski weights, cone lemmas and partition of unity.

A degree-k stress is a polynomial ``s = sum_a s_a x^a`` supported on faces
that is killed by every theta_i acting as the differential operator
``sum_v V[i, v] d/dx_v``.  These spaces are dual to the graded pieces of the
Artinian reduction, so their dimensions must agree; the checks below compare
the two routes.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field as dc_field

import numpy as np

from .artinian import FaceModule, GradedAlgebra, build, relative_module
from .complex import SimplicialComplex, sorted_face
from .exactla import Field, PrimeField, dense_nullspace, dense_rank, vstack
from .realization import Realization, is_proper, link_realization


@dataclass(frozen=True, eq=False)
class StressSpace:
    complex: SimplicialComplex
    realization: Realization
    degree: int
    monomials: list   # exponent tuples indexing the coefficient space
    basis: np.ndarray  # rows are stresses

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def squarefree_part(self) -> tuple[list[frozenset], np.ndarray]:
        """Coefficients of the squarefree monomials, as weights on (k-1)-faces."""
        verts = self.complex.vertices
        cols, faces = [], []
        for j, m in enumerate(self.monomials):
            if max(m, default=0) <= 1:
                cols.append(j)
                faces.append(frozenset(verts[i] for i, e in enumerate(m) if e))
        return faces, self.basis[:, cols]


@dataclass(frozen=True, eq=False)
class MinkowskiWeight:
    degree: int
    weights: dict  # (k-1)-face -> scalar
    field: Field = dc_field(repr=False)

    def to_json(self) -> str:
        return json.dumps({" ".join(map(str, sorted_face(f))): self.field.to_str(w)
                           for f, w in sorted(self.weights.items(), key=lambda t: sorted_face(t[0]))})


def _face_monomials(c: SimplicialComplex, k: int, gamma: SimplicialComplex | None = None) -> list[tuple]:
    idx = c.index
    excluded = set()
    if gamma is not None:
        excluded = {frozenset(idx[v] for v in f) for f in gamma.faces() if all(v in idx for v in f)}
    out = []
    n = c.n
    for f in c.faces():
        face = frozenset(idx[v] for v in f)
        if face in excluded or len(face) > k or (k > 0 and not face):
            continue
        if k == 0:
            out.append((0,) * n)
            continue
        verts = sorted(face)
        for cuts in itertools.combinations(range(1, k), len(verts) - 1):
            b = (0,) + cuts + (k,)
            m = [0] * n
            for j, v in enumerate(verts):
                m[v] = b[j + 1] - b[j]
            out.append(tuple(m))
    return sorted(out)


def differential_matrix(c: SimplicialComplex, r: Realization, k: int,
                        gamma: SimplicialComplex | None = None) -> tuple[np.ndarray, list, list]:
    """Matrix of the theta-derivatives from degree k to degree k-1 coefficients.

    Rows are indexed by (i, b) with b a degree-(k-1) monomial and columns by
    degree-k monomials a; the entry for a = b + e_v is V[i, v] * (b_v + 1).
    """
    f = r.field
    cols = _face_monomials(c, k, gamma)
    rows_m = _face_monomials(c, k - 1, gamma) if k > 0 else []
    cidx = {m: j for j, m in enumerate(cols)}
    l = r.l
    mat = f.zeros((l * len(rows_m), len(cols)))
    V = r.coords if r.complex == c else r.restrict(c).coords
    for a_i, b in enumerate(rows_m):
        for v in range(c.n):
            mm = list(b)
            mm[v] += 1
            j = cidx.get(tuple(mm))
            if j is None:
                continue
            mult = b[v] + 1
            for i in range(l):
                val = V[i, v] * mult
                mat[i * len(rows_m) + a_i, j] = val % f.p if isinstance(f, PrimeField) else val
    return mat, rows_m, cols


def stress_space(c: SimplicialComplex, r: Realization, k: int,
                 gamma: SimplicialComplex | None = None, check: bool = True) -> StressSpace:
    """Degree-k stresses of ``c`` (relative to ``gamma`` when given)."""
    if check and not is_proper(r.restrict(c) if r.complex != c else r):
        raise ValueError("realization is not proper")
    f = r.field
    mat, _, cols = differential_matrix(c, r, k, gamma)
    if len(cols) == 0:
        basis = f.zeros((0, 0))
    elif mat.shape[0] == 0:
        basis = f.eye(len(cols))
    else:
        basis = dense_nullspace(f, mat)
    return StressSpace(c, r, k, cols, basis)


def balancing_matrix(c: SimplicialComplex, r: Realization, k: int) -> tuple[np.ndarray, list[frozenset]]:
    """Linear constraints on weights of (k-1)-faces expressing Minkowski balancing.

    At each (k-2)-face tau the weighted sum of the edge directions
    ``sum c(tau + v) V_v`` must lie in span(V_tau).  Pairing with a basis of
    the left null space of V_tau gives ``l - |tau|`` scalar constraints.
    """
    f = r.field
    V = r.coords if r.complex == c else r.restrict(c).coords
    idx = c.index
    faces = c.faces(k - 1)
    fidx = {s: j for j, s in enumerate(faces)}
    blocks = []
    for tau in c.faces(k - 2) if k >= 1 else []:
        tcols = V[:, [idx[v] for v in sorted_face(tau)]]
        q = dense_nullspace(f, tcols.T) if tau else f.eye(r.l)
        if q.shape[0] == 0:
            continue
        cofaces = [s for s in faces if tau < s]
        if not cofaces:
            continue
        block = f.zeros((q.shape[0], len(faces)))
        for s in cofaces:
            (v,) = s - tau
            block[:, fidx[s]] = f.matmul(q, V[:, idx[v]])
        blocks.append(block)
    return vstack(f, blocks, len(faces)), faces


def minkowski_weights(c: SimplicialComplex, r: Realization, k: int) -> list[MinkowskiWeight]:
    f = r.field
    mat, faces = balancing_matrix(c, r, k)
    if not faces:
        return []
    basis = dense_nullspace(f, mat) if mat.shape[0] else f.eye(len(faces))
    return [MinkowskiWeight(k, {s: w for s, w in zip(faces, row) if w != 0}, f) for row in basis]


def balancing_residual(c: SimplicialComplex, r: Realization, w: MinkowskiWeight) -> bool:
    """True when ``w`` satisfies balancing exactly at every (k-2)-face."""
    f = r.field
    mat, faces = balancing_matrix(c, r, w.degree)
    vec = f.zeros(len(faces))
    for j, s in enumerate(faces):
        if s in w.weights:
            vec[j] = w.weights[s]
    return not np.any(f.matmul(mat, vec) != 0) if mat.shape[0] else True


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: dict

    def __bool__(self) -> bool:
        return self.passed


def squarefree_restriction_check(c: SimplicialComplex, r: Realization, k: int) -> CheckResult:
    """Stress dimension equals weight dimension and restriction to squarefree terms is injective."""
    rc = r.restrict(c) if r.complex != c else r
    if not is_proper(rc):
        return CheckResult("squarefree-restriction", False, {"skipped": "realization not proper"})
    if rc.l != c.dim + 1:
        return CheckResult("squarefree-restriction", False,
                           {"skipped": f"needs a (d-1)-complex in dimension d, got l={rc.l}"})
    f = r.field
    ss = stress_space(c, rc, k)
    faces, sq = ss.squarefree_part()
    weights = minkowski_weights(c, rc, k)
    wfaces = c.faces(k - 1)
    pos = {s: j for j, s in enumerate(wfaces)}
    sq_full = f.zeros((ss.dim, len(wfaces)))
    for j, s in enumerate(faces):
        sq_full[:, pos[s]] = sq[:, j]
    rank_sq = dense_rank(f, sq_full) if ss.dim else 0
    bal, _ = balancing_matrix(c, rc, k)
    balanced = (not bal.shape[0]) or ss.dim == 0 or not np.any(f.matmul(sq_full, bal.T) != 0)
    ok = ss.dim == len(weights) and rank_sq == ss.dim and balanced
    return CheckResult("squarefree-restriction", ok,
                       {"k": k, "stress_dim": ss.dim, "weight_dim": len(weights),
                        "restriction_rank": rank_sq, "restricted_balanced": balanced})


def cone_lemma_check(c: SimplicialComplex, r: Realization, v, k: int) -> CheckResult:
    """Compare link and star, and test x_v on the open star.

    Checks dim A^k(Lk_v) = dim A^k(St_v), the link realized by projecting
    along the position of v, and that multiplication by x_v from A^k(St_v)
    to A^{k+1}(St_v, St_v - v) is an isomorphism.
    """
    f = r.field
    st = c.star({v})
    lk = c.link({v})
    rs = r.restrict(st)
    star_alg = build(st, rs, check=False)
    lk_alg = build(lk, link_realization(r, v), check=False)
    dim_st = star_alg.dim(k)
    dim_lk = lk_alg.dim(k)
    rel = relative_module(rs, st.deletion({v}))
    tgt = rel.dim(k + 1)
    # multiply each star basis monomial by x_v and reduce in the relative module
    vi = st.index[v]
    mat = f.zeros((dim_st, tgt))
    for s, b in enumerate(star_alg.basis(k)):
        m = list(b)
        m[vi] += 1
        if k + 1 <= rel.top:
            mat[s] = rel.monomial_coords(tuple(m))
    rk = dense_rank(f, mat) if mat.size else 0
    ok = dim_st == dim_lk and rk == dim_st == tgt
    return CheckResult("cone", ok, {"vertex": str(v), "k": k, "dim_star": dim_st,
                                    "dim_link": dim_lk, "dim_open_star": tgt, "rank_x_v": rk})


def partition_map(alg: GradedAlgebra, k: int) -> np.ndarray:
    """A^k(Delta) -> direct sum over vertices of A^k(St_v Delta)."""
    c = alg.complex
    mats = []
    for v in c.vertices:
        st = c.star({v})
        sa = alg.sub_algebra(st, top=min(alg.top, k))
        mats.append(alg.restriction_matrix(sa, k))
    mats = [m for m in mats if m.shape[1]]
    if not mats:
        return alg.field.zeros((alg.dim(k), 0))
    return np.hstack(mats)


def partition_of_unity_check(c: SimplicialComplex, r: Realization, k: int,
                             quotient: bool = False) -> CheckResult:
    """Injectivity of A^k (or B^k with ``quotient``) into the sum over vertex stars."""
    f = r.field
    alg = build(c, r, check=False)
    m = partition_map(alg, k)
    src = alg.dim(k)
    if quotient:
        b = alg.gorenstein_quotient()
        m = f.matmul(b.lift(k), m)
        src = b.dim(k)
    rk = dense_rank(f, m) if m.size else 0
    return CheckResult("partition", rk == src,
                       {"k": k, "source_dim": src, "rank": rk, "kernel_dim": src - rk,
                        "target_dim": m.shape[1], "space": "B" if quotient else "A"})


def weil_duality_check(c: SimplicialComplex, r: Realization) -> CheckResult:
    """dim A^k = dim of stresses = dim of Minkowski weights, every degree."""
    alg = build(c, r, check=False)
    rows = []
    ok = True
    for k in range(alg.top + 1):
        a = alg.dim(k)
        s = stress_space(c, r, k, check=False).dim
        w = len(minkowski_weights(c, r, k)) if k <= c.dim + 1 else 0
        rows.append({"k": k, "primal": a, "stress": s, "weights": w})
        ok &= a == s == w
    return CheckResult("weil-duality", ok, {"degrees": rows})
