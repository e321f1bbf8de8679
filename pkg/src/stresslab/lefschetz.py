"""Lefschetz maps, pairings on ideals, and perturbation utilities.

Verdicts about generic behaviour are Monte Carlo: a pass records the
realization seed, trial and Lefschetz element that witnessed it, and a fail
means no witness turned up in the allotted trials.  Every rank here is exact;
only :func:`approximation_check` uses floating point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np
from gmpy2 import mpq

from .artinian import GorensteinQuotient, GradedAlgebra, build, relative_module
from .complex import SimplicialComplex
from .exactla import (QQ, Field, PrimeField, SparseMatrix, Subspace, dense_nullspace, dense_rank,
                      intersect, kernel, rank, subspace_sum, to_fraction, vstack)
from .realization import (TAG_ELEMENT, TAG_SCALAR, TAG_SUBSPACE, Realization, lift_to_rationals,
                          link_realization, random_realization, resolve_field, rng_for)
from .stress import CheckResult

DEFAULT_TRIALS = 5
ELEMENT_BOUND = 10**6


# ------------------------------------------------------------------ reports

@dataclass
class PairingReport:
    kind: str
    degrees: tuple[int, int]
    restriction: str
    gram: np.ndarray
    rank: int
    dim: int
    nondegenerate: bool
    field: str
    seed: int | None = None
    trial: int | None = None
    ell: list | None = None
    signature: tuple[int, int, int] | None = None
    details: dict = dc_field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "nondegenerate" if self.nondegenerate else "degenerate"

    def __bool__(self) -> bool:
        return self.nondegenerate

    def to_dict(self) -> dict:
        return {
            "kind": self.kind, "degrees": list(self.degrees), "restriction": self.restriction,
            "rank": self.rank, "dim": self.dim, "verdict": self.verdict, "field": self.field,
            "seed": self.seed, "trial": self.trial,
            "ell": None if self.ell is None else [str(x) for x in self.ell],
            "signature": None if self.signature is None else list(self.signature),
            "gram": [[str(x) for x in row] for row in self.gram],
            "details": self.details,
        }


@dataclass
class LefschetzCertificate:
    complex_f: tuple
    k: int
    power: int
    rank: int
    source_dim: int
    target_dim: int
    passed: bool
    field: str
    seed: int
    trial: int | None
    ell: list | None
    variant: str = "A"
    recertified_q: bool | None = None
    trials_used: int = 0
    details: dict = dc_field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "no witness found"

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict:
        return {
            "f_vector": list(self.complex_f), "k": self.k, "power": self.power, "rank": self.rank,
            "source_dim": self.source_dim, "target_dim": self.target_dim, "verdict": self.verdict,
            "field": self.field, "seed": self.seed, "trial": self.trial,
            "ell": None if self.ell is None else [str(x) for x in self.ell],
            "variant": self.variant, "recertified_q": self.recertified_q,
            "trials_used": self.trials_used, "details": self.details,
        }


# ------------------------------------------------------------------ helpers

def random_linear(field: Field, n: int, rng: np.random.Generator, bound: int = ELEMENT_BOUND) -> np.ndarray:
    """Coefficients of a random degree-one element."""
    if isinstance(field, PrimeField):
        return field.random(rng, n)
    return field.array(rng.integers(-bound, bound + 1, size=n))


def _rank(field: Field, m: np.ndarray) -> int:
    return dense_rank(field, m) if m.size else 0


def signature(gram: np.ndarray) -> tuple[int, int, int]:
    """(positive, negative, zero) counts of a rational symmetric matrix."""
    a = np.array(gram, dtype=object, copy=True)
    n = a.shape[0]
    pos = neg = 0
    idx = list(range(n))
    while idx:
        # pick a nonzero diagonal entry, creating one if needed
        piv = next((i for i in idx if a[i, i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in idx for j in idx if i < j and a[i, j] != 0), None)
            if pair is None:
                break
            i, j = pair
            a[i, :] = a[i, :] + a[j, :]
            a[:, i] = a[:, i] + a[:, j]
            piv = i
        p = a[piv, piv]
        if p > 0:
            pos += 1
        else:
            neg += 1
        idx.remove(piv)
        for i in idx:
            if a[i, piv] != 0:
                fct = a[i, piv] / p
                a[i, :] = a[i, :] - fct * a[piv, :]
                a[:, i] = a[:, i] - fct * a[:, piv]
    return pos, neg, n - pos - neg


def _space_rows(field: Field, s: Subspace) -> np.ndarray:
    return s.basis if s.dim else field.zeros((0, s.ambient))


class _Ring:
    """Uniform access to A^* or B^* for the pairing checks."""

    def __init__(self, alg: GradedAlgebra, quotient: bool):
        self.alg = alg
        self.field = alg.field
        self.d = alg.d
        self.q: GorensteinQuotient | None = alg.gorenstein_quotient() if quotient else None

    @property
    def name(self) -> str:
        return "B" if self.q is not None else "A"

    def dim(self, k: int) -> int:
        return self.q.dim(k) if self.q is not None else self.alg.dim(k)

    def pairing(self, k: int) -> np.ndarray:
        return self.q.pairing_matrix(k) if self.q is not None else self.alg.pairing_matrix(k)

    def power(self, ell, k: int, p: int) -> np.ndarray:
        return self.q.power_matrix(ell, k, p) if self.q is not None else self.alg.power_matrix(ell, k, p)

    def from_a(self, k: int, s: Subspace) -> Subspace:
        return self.q.image(k, s) if self.q is not None else s

    def ideal(self, sub: SimplicialComplex, k: int) -> Subspace:
        return self.from_a(k, self.alg.ideal(sub).space(k))

    def annihilator(self, sub: SimplicialComplex, k: int) -> Subspace:
        """Ann(K)^k, computed by intersecting kernels of the generator products."""
        if self.q is None:
            return self.alg.ideal(sub).annihilator(k)
        f, q, a = self.field, self.q, self.alg
        mats = []
        for g in a.ideal(sub).generators:
            tgt = k + sum(g)
            if tgt > a.top or q.dim(tgt) == 0:
                continue
            mats.append(f.matmul(f.matmul(q.lift(k), a.monomial_matrix(g, k)), q.proj(tgt)))
        if not mats or q.dim(k) == 0:
            return Subspace.full(f, q.dim(k))
        null = dense_nullspace(f, np.hstack(mats).T)
        return Subspace.span(f, q.dim(k), null) if len(null) else Subspace.zero(f, q.dim(k))


def _manifold_kind(c: SimplicialComplex) -> str:
    if c.is_homology_sphere():
        return "sphere"
    if c.is_homology_manifold():
        return "manifold"
    return "other"


# --------------------------------------------------------------- Lefschetz

def lefschetz_rank(ring: _Ring, ell, k: int) -> tuple[int, int, int]:
    d = ring.d
    m = ring.power(ell, k, d - 2 * k)
    return _rank(ring.field, m), ring.dim(k), ring.dim(d - k)


def lefschetz_check(c: SimplicialComplex, k: int, trials: int = DEFAULT_TRIALS, seed: int = 0,
                    field="fp:random", realization: Realization | None = None, ell=None,
                    recertify: bool = False, variant: str | None = None) -> LefschetzCertificate:
    """Search for (Theta, ell) making ell^(d-2k): A^k -> A^(d-k) an isomorphism.

    Closed manifolds that are not spheres use the quotient B^*.  A fixed
    ``realization`` is reused for every trial; a fixed ``ell`` too.
    """
    fld = realization.field if realization is not None else resolve_field(field, seed)
    if variant is None:
        kind = _manifold_kind(c)
        if kind == "other":
            raise ValueError("need a homology sphere or closed homology manifold")
        variant = "A" if kind == "sphere" else "B"
    d = c.dim + 1
    if not 0 <= 2 * k <= d:
        raise ValueError(f"need 0 <= 2k <= d = {d}")
    last = None
    for t in range(trials):
        r = realization if realization is not None else random_realization(c, d, seed, field=fld, trial=t)
        alg = build(c, r, check=realization is None)
        ring = _Ring(alg, variant == "B")
        coeffs = ell if ell is not None else random_linear(fld, c.n, rng_for(seed, TAG_ELEMENT, t))
        rk, src, tgt = lefschetz_rank(ring, coeffs, k)
        ok = rk == src == tgt
        last = LefschetzCertificate(c.f_vector, k, d - 2 * k, rk, src, tgt, ok, fld.name, seed,
                                    t, [fld.to_str(x) for x in coeffs], variant, None, t + 1)
        if ok:
            if recertify and isinstance(fld, PrimeField):
                rq = lift_to_rationals(r)
                aq = build(c, rq, check=False)
                cq = QQ.array(np.asarray(coeffs).astype(object))
                rkq, srcq, tgtq = lefschetz_rank(_Ring(aq, variant == "B"), cq, k)
                last.recertified_q = rkq == srcq == tgtq == src
                last.details["q_rank"] = rkq
            return last
    if last is not None:
        last.trial = None
    return last


# ---------------------------------------------------------------- pairings

def poincare_pairing(alg: GradedAlgebra, k: int, quotient: bool = False) -> PairingReport:
    d = alg.d
    if not 0 <= k <= d:
        raise ValueError("degree out of range")
    ring = _Ring(alg, quotient)
    g = ring.pairing(k)
    rk = _rank(alg.field, g)
    ok = rk == ring.dim(k) == ring.dim(d - k)
    return PairingReport("poincare", (k, d - k), "full " + ring.name, g, rk, ring.dim(k), ok,
                         alg.field.name, details={"dims": [ring.dim(k), ring.dim(d - k)]})


def _restricted_space(ring: _Ring, restriction, k: int) -> tuple[Subspace, str]:
    if restriction is None or restriction == "full":
        return Subspace.full(ring.field, ring.dim(k)), "full"
    kind, sub = restriction
    if kind == "ideal":
        return ring.ideal(sub, k), "ideal"
    if kind == "annihilator":
        return ring.annihilator(sub, k), "annihilator"
    raise ValueError(f"unknown restriction {kind!r}")


def hodge_riemann_form(alg: GradedAlgebra, ell, k: int, restriction=None,
                       quotient: bool = False) -> PairingReport:
    """Gram matrix of (a, b) -> deg(a b ell^(d-2k)) on a subspace of A^k.

    ``restriction`` is None/"full", ("ideal", subcomplex) or
    ("annihilator", subcomplex).
    """
    d = alg.d
    if 2 * k > d:
        raise ValueError("need 2k <= d")
    f = alg.field
    ring = _Ring(alg, quotient)
    s, label = _restricted_space(ring, restriction, k)
    rows = _space_rows(f, s)
    if s.dim == 0:
        return PairingReport("hodge_riemann", (k, k), label, f.zeros((0, 0)), 0, 0, True, f.name,
                             details={"note": "empty subspace"})
    lp = ring.power(ell, k, d - 2 * k)
    g = f.matmul(f.matmul(rows, ring.pairing(k)), f.matmul(rows, lp).T)
    rk = _rank(f, g)
    sig = signature(g) if not isinstance(f, PrimeField) else None
    return PairingReport("hodge_riemann", (k, k), label, g, rk, s.dim, rk == s.dim, f.name,
                         ell=[f.to_str(x) for x in ell], signature=sig)


def ideal_pairing(ring: _Ring, sub: SimplicialComplex, k: int) -> tuple[np.ndarray, Subspace, Subspace]:
    """Gram of K^k x K^(d-k) and the two ideal pieces."""
    f = ring.field
    d = ring.d
    sk = ring.ideal(sub, k)
    sdk = ring.ideal(sub, d - k)
    g = f.matmul(f.matmul(_space_rows(f, sk), ring.pairing(k)), _space_rows(f, sdk).T)
    return g, sk, sdk


def biased_pd_check(c: SimplicialComplex, sub: SimplicialComplex, k: int,
                    trials: int = DEFAULT_TRIALS, seed: int = 0, field="fp:random",
                    realization: Realization | None = None, quotient: bool | None = None) -> PairingReport:
    """First-factor nondegeneracy of K^k x K^(d-k) -> K^d ~ field."""
    if not sub.is_subcomplex_of(c):
        raise ValueError("not a subcomplex")
    fld = realization.field if realization is not None else resolve_field(field, seed)
    if quotient is None:
        quotient = not c.is_homology_sphere() and c.is_homology_manifold()
    d = c.dim + 1
    if 2 * k > d:
        raise ValueError("need k <= d/2")
    report = None
    for t in range(trials if realization is None else 1):
        r = realization if realization is not None else random_realization(c, d, seed, field=fld, trial=t)
        alg = build(c, r, check=False)
        ring = _Ring(alg, quotient)
        g, sk, sdk = ideal_pairing(ring, sub, k)
        rk = _rank(fld, g)
        ann = ring.annihilator(sub, k)
        meet = intersect(sk, ann).dim if sk.dim else 0
        details = {"dim_K_k": sk.dim, "dim_K_dk": sdk.dim, "K_cap_ann": meet,
                   "injective_into_quotient": meet == 0, "space": ring.name}
        if d == 2 * k and sub.dim == d - 2 and sub.is_homology_sphere():
            sub_alg = alg.sub_algebra(sub, top=k)
            details["envelope_dim"] = sub_alg.dim(k)
            details["envelope_agrees"] = (sub_alg.dim(k) == 0) == (rk == sk.dim)
        report = PairingReport("biased_pd", (k, d - k), "ideal", g, rk, sk.dim, rk == sk.dim,
                               fld.name, seed=seed, trial=t, details=details)
        if report.nondegenerate:
            return report
    return report


def hall_laman_check(alg: GradedAlgebra, ell, k: int, sub: SimplicialComplex,
                     quotient: bool = False) -> PairingReport:
    """Hodge-Riemann form restricted to the ideal K^k(sub)."""
    rep = hodge_riemann_form(alg, ell, k, ("ideal", sub), quotient)
    rep.kind = "hall_laman"
    return rep


def _local_sub(sub: SimplicialComplex, v) -> SimplicialComplex:
    return sub.link({v}) if v in sub.index else SimplicialComplex([])


def persistence_check(c: SimplicialComplex, sub: SimplicialComplex, k: int, seed: int = 0,
                      field="fp:random", realization: Realization | None = None) -> CheckResult:
    """Biased duality in every vertex link must force it globally (k < d/2).

    Passes unless all links satisfy it while the whole complex does not.
    """
    d = c.dim + 1
    if 2 * k >= d:
        raise ValueError("need k < d/2")
    fld = realization.field if realization is not None else resolve_field(field, seed)
    r = realization if realization is not None else random_realization(c, d, seed, field=fld)
    quotient = not c.is_homology_sphere()
    local = {}
    for v in c.vertices:
        lk = c.link({v})
        lr = link_realization(r, v)
        ring = _Ring(build(lk, lr, check=False), False)
        g, sk, _ = ideal_pairing(ring, _local_sub(sub, v), k)
        local[str(v)] = _rank(fld, g) == sk.dim
    glob = biased_pd_check(c, sub, k, realization=r, quotient=quotient)
    all_local = all(local.values())
    ok = (not all_local) or glob.nondegenerate
    return CheckResult("persistence", ok, {"k": k, "links": local, "all_links": all_local,
                                           "global": glob.nondegenerate})


def kappa_monotonicity_check(alg: GradedAlgebra, sub: SimplicialComplex, k: int,
                             ell=None, rng: np.random.Generator | None = None) -> CheckResult:
    """kappa_k <= kappa_{k+1}, plus injectivity of ell: K^k -> K^(k+1)."""
    f = alg.field
    ideal = alg.ideal(sub)
    kk, kk1 = ideal.dim(k), ideal.dim(k + 1)
    if ell is None:
        ell = random_linear(f, alg.n, rng if rng is not None else rng_for(0, TAG_ELEMENT))
    s = ideal.space(k)
    img_rank = _rank(f, f.matmul(s.basis, alg.linear_matrix(ell, k))) if s.dim else 0
    return CheckResult("kappa", kk <= kk1,
                       {"k": k, "kappa_k": kk, "kappa_k1": kk1, "monotone": kk <= kk1,
                        "ell_injective_on_ideal": img_rank == kk, "ell_rank": img_rank})


# --------------------------------------------------------- perturbation

def _column_space(f: Field, m: np.ndarray) -> Subspace:
    if m.size == 0 or not np.any(m != 0):
        return Subspace.zero(f, m.shape[0])
    return Subspace.span(f, m.shape[0], m.T)


def _image_of(f: Field, m: np.ndarray, s: Subspace) -> Subspace:
    """m applied (as a column operator) to the subspace s."""
    if s.dim == 0:
        return Subspace.zero(f, m.shape[0])
    return _column_space(f, f.matmul(m, s.basis.T))


def transversal(alpha: SparseMatrix, beta: SparseMatrix) -> bool:
    f = alpha.field
    a, b = alpha.to_dense(), beta.to_dense()
    return intersect(_image_of(f, b, kernel(alpha)), _column_space(f, a)).dim == 0


def perturbation_check(alpha: SparseMatrix, beta: SparseMatrix, samples: int = 5,
                       rng: np.random.Generator | None = None) -> CheckResult:
    """Kernel and image of alpha + eps beta for random eps under transversality.

    Statement (1): when beta(ker alpha) meets im alpha only in 0, the kernel
    of a generic combination is ker alpha & ker beta.  Statement (2): when
    beta^{-1}(im alpha) + ker alpha is everything, the image is
    im alpha + im beta.  The finitely many exceptional eps are logged.
    """
    if alpha.shape != beta.shape:
        raise ValueError("shape mismatch")
    if alpha.field != beta.field:
        raise ValueError("field mismatch")
    f = alpha.field
    rng = rng if rng is not None else rng_for(0, TAG_SCALAR)
    a, b = alpha.to_dense(), beta.to_dense()
    ka, kb = kernel(alpha), kernel(beta)
    ia, ib = _column_space(f, a), _column_space(f, b)
    hyp1 = intersect(_image_of(f, b, ka), ia).dim == 0
    pre = _preimage(f, b, ia)
    hyp2 = subspace_sum(pre, ka).dim == a.shape[1]
    want_k = intersect(ka, kb)
    want_i = subspace_sum(ia, ib)
    results, exceptions = [], []
    for _ in range(samples):
        eps = random_linear(f, 1, rng)[0]
        while eps == 0:
            eps = random_linear(f, 1, rng)[0]
        m = f.add(a, f.scale(eps, b))
        ms = SparseMatrix.from_dense(m, f)
        k_ok = kernel(ms) == want_k if hyp1 else None
        i_ok = _column_space(f, m) == want_i if hyp2 else None
        results.append({"eps": f.to_str(eps), "kernel": k_ok, "image": i_ok})
        if k_ok is False or i_ok is False:
            exceptions.append(f.to_str(eps))
    ok = (hyp1 or hyp2) and not exceptions
    return CheckResult("perturbation", ok, {"transversal": hyp1, "dual_transversal": hyp2,
                                            "samples": results, "exceptions": exceptions,
                                            "kernel_dim": want_k.dim, "image_dim": want_i.dim})


def _preimage(f: Field, m: np.ndarray, s: Subspace) -> Subspace:
    """{x : m x in s} for a column operator m."""
    ann = s.annihilator()
    if ann.dim == 0:
        return Subspace.full(f, m.shape[1])
    cond = f.matmul(ann.basis, m)
    if not np.any(cond != 0):
        return Subspace.full(f, m.shape[1])
    null = dense_nullspace(f, cond)
    return Subspace.span(f, m.shape[1], null) if len(null) else Subspace.zero(f, m.shape[1])


def random_transversal_pair(f: Field, rng: np.random.Generator, n: int = 6,
                            bound: int = 5, max_tries: int = 100) -> tuple[SparseMatrix, SparseMatrix]:
    """Random n x n pair (alpha, beta) with alpha of deficient rank and beta(ker a) & im a = 0."""
    for _ in range(max_tries):
        r = int(rng.integers(1, n))
        left = rng.integers(-bound, bound + 1, size=(n, r))
        right = rng.integers(-bound, bound + 1, size=(r, n))
        a = f.array(left @ right)
        b = f.array(rng.integers(-bound, bound + 1, size=(n, n)))
        alpha, beta = SparseMatrix.from_dense(a, f), SparseMatrix.from_dense(b, f)
        if transversal(alpha, beta):
            return alpha, beta
    raise RuntimeError("no transversal pair found")


# ----------------------------------------------------- decaying elements

def decaying_coefficients(alg: GradedAlgebra, order, ratio, offset: int = 0) -> np.ndarray:
    """Coefficient vector of sum_i ratio^-(i+offset) x_{order[i]}."""
    f = alg.field
    ratio = Fraction(ratio)
    if ratio <= 1:
        raise ValueError("ratio must exceed 1 for a decaying sequence")
    coeffs = f.zeros(alg.n)
    for i, v in enumerate(order):
        val = ratio ** -(i + offset)
        coeffs[alg.complex.index[v]] = f.convert(val)
    return coeffs


def decaying_element(alg: GradedAlgebra, order, ratio):
    return alg.linear_form(decaying_coefficients(alg, order, ratio))


def _float_basis(s: Subspace) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in s.basis], dtype=float).T


def approximation_check(alg: GradedAlgebra, order, ratio=100, steps: int = 3,
                        degree: int | None = None, tol: float = 1e-6) -> CheckResult:
    """Kernels of alpha + eps beta approach the predicted limit as eps shrinks.

    alpha = x_{order[0]}, beta = sum_{i>=1} ratio^-(i-1) x_{order[i]} and
    eps = ratio^-t for t = 1..steps, acting A^j -> A^(j+1) with
    j = ceil(d/2) unless ``degree`` is given.  The limit is
    ker alpha & ker[beta: A^j -> A^(j+1) / im alpha].  Principal angles are
    measured in floating point; the largest angle must not increase.
    """
    from scipy.linalg import subspace_angles

    f = alg.field
    if isinstance(f, PrimeField):
        raise ValueError("approximation check needs the rationals")
    if Fraction(ratio) <= 1:
        raise ValueError("ratio must exceed 1")
    j = math.ceil(alg.d / 2) if degree is None else degree
    a_coef = f.zeros(alg.n)
    a_coef[alg.complex.index[order[0]]] = mpq(1)
    b_coef = decaying_coefficients(alg, order[1:], ratio) if len(order) > 1 else f.zeros(alg.n)
    A = alg.linear_matrix(a_coef, j)   # row convention: x @ A
    B = alg.linear_matrix(b_coef, j)
    X = alg.dim(j)
    ka = _left_kernel(f, A, X)
    im_a = Subspace.span(f, alg.dim(j + 1), A) if A.size and np.any(A != 0) else Subspace.zero(f, alg.dim(j + 1))
    # ker of beta modulo im alpha: x B in im alpha
    ann = im_a.annihilator()
    cond = f.matmul(B, ann.basis.T) if ann.dim else f.zeros((X, 0))
    kb_mod = _left_kernel(f, cond, X)
    limit = intersect(ka, kb_mod)
    angles, dims = [], []
    for t in range(1, steps + 1):
        eps = mpq(1) / mpq(Fraction(ratio) ** t)
        m = f.add(A, f.scale(eps, B))
        ker = _left_kernel(f, m, X)
        dims.append(ker.dim)
        if ker.dim != limit.dim:
            angles.append(float("nan"))
            continue
        if ker.dim == 0:
            angles.append(0.0)
            continue
        angles.append(float(np.max(subspace_angles(_float_basis(ker), _float_basis(limit)))))
    finite = all(not math.isnan(x) for x in angles)
    monotone = finite and all(angles[i + 1] <= angles[i] + tol for i in range(len(angles) - 1))
    return CheckResult("approximation", monotone,
                       {"degree": j, "angles": angles, "kernel_dims": dims, "limit_dim": limit.dim,
                        "ratio": str(ratio)})


def _left_kernel(f: Field, m: np.ndarray, nrows: int) -> Subspace:
    if nrows == 0:
        return Subspace.zero(f, 0)
    if m.size == 0 or not np.any(m != 0):
        return Subspace.full(f, nrows)
    null = dense_nullspace(f, m.T)
    return Subspace.span(f, nrows, null) if len(null) else Subspace.zero(f, nrows)


# --------------------------------------------- L-decomposable Lefschetz

def l_decomposable_lefschetz(c: SimplicialComplex, k: int = 1, seed: int = 0, field="fp:random",
                             ratio=100, trials: int = DEFAULT_TRIALS) -> LefschetzCertificate:
    """Lefschetz check with a decaying element along an L-decomposition.

    Also checks, for every ball left after removing an initial segment of
    the order, that ell^(d-2k): A^k(ball, boundary) -> A^(d-k)(ball) is an
    isomorphism, with ell restricted to the surviving vertices.
    """
    order = c.l_decomposition()
    if order is None:
        raise ValueError("complex is not L-decomposable")
    fld = resolve_field(field, seed)
    d = c.dim + 1
    removed = order[: c.n - d]
    last = None
    for t in range(trials):
        r = random_realization(c, d, seed, field=fld, trial=t)
        alg = build(c, r, check=False)
        ell = decaying_coefficients(alg, order, ratio)
        rk, src, tgt = lefschetz_rank(_Ring(alg, False), ell, k)
        steps = []
        ball = c
        ok_steps = True
        for i, v in enumerate(removed):
            ball = ball.deletion({v})
            rb = r.restrict(ball)
            ball_alg = build(ball, rb, check=False)
            rel = relative_module(rb, ball.boundary(), top=k)
            ell_b = decaying_coefficients(ball_alg, order[i + 1:], ratio, offset=i + 1)
            lp = ball_alg.power_matrix(ell_b, k, d - 2 * k)
            emb = fld.zeros((rel.dim(k), ball_alg.dim(k)))
            for s, m in enumerate(rel.basis(k)):
                emb[s] = ball_alg.monomial_coords(m)
            mat = fld.matmul(emb, lp) if emb.size and lp.size else fld.zeros((rel.dim(k), ball_alg.dim(d - k)))
            brk = _rank(fld, mat)
            step_ok = brk == rel.dim(k) == ball_alg.dim(d - k)
            ok_steps &= step_ok
            steps.append({"removed": str(v), "rel_dim": rel.dim(k), "target_dim": ball_alg.dim(d - k),
                          "rank": brk, "ok": step_ok})
        ok = rk == src == tgt and ok_steps
        last = LefschetzCertificate(c.f_vector, k, d - 2 * k, rk, src, tgt, ok, fld.name, seed, t,
                                    [fld.to_str(x) for x in ell], "A", None, t + 1,
                                    {"order": [str(v) for v in order], "steps": steps})
        if ok:
            return last
    last.trial = None
    return last


# ----------------------------------------------------------- Kazhdan

@dataclass
class KazhdanReport:
    n: int
    symmetric: bool
    isotropic: bool
    expansion: list = dc_field(default_factory=list)  # (m, dim delta(X', X'))

    @property
    def expands(self) -> bool:
        return all(dd > m for m, dd in self.expansion)


def kazhdan_pairs(n: int) -> list[tuple[int, int]]:
    """Basis of Y: pairs i < j (1-based) with j - i odd."""
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1) if (j - i) % 2]


def kazhdan_delta(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """delta(x, y) = [x ^ alpha y] in Y, alpha(e_i) = (-1)^i e_i (1-based)."""
    n = len(x)
    sgn = np.array([(-1) ** i for i in range(1, n + 1)], dtype=object)
    ay = sgn * y
    return np.array([x[i - 1] * ay[j - 1] - x[j - 1] * ay[i - 1] for i, j in kazhdan_pairs(n)],
                    dtype=object)


def kazhdan_example(n: int = 8, vectors: int = 100, subspaces: int = 50, max_m: int = 4,
                    seed: int = 0, bound: int = 1000, dims=None) -> KazhdanReport:
    """Symmetry, isotropy of delta(x, alpha x), and expansion on random subspaces."""
    if n < 4 or n % 2:
        raise ValueError("need an even n >= 4")
    rng = rng_for(seed, TAG_SUBSPACE)
    sym = iso = True
    sgn = np.array([(-1) ** i for i in range(1, n + 1)], dtype=object)
    for _ in range(vectors):
        x = rng.integers(-bound, bound + 1, size=n).astype(object)
        y = rng.integers(-bound, bound + 1, size=n).astype(object)
        sym &= bool(np.all(kazhdan_delta(x, y) == kazhdan_delta(y, x)))
        iso &= bool(np.all(kazhdan_delta(x, sgn * x) == 0))
    report = KazhdanReport(n, sym, iso)
    choices = list(dims) if dims is not None else list(range(2, min(max_m, n // 2) + 1))
    for s in range(subspaces):
        m = choices[s % len(choices)]
        basis = [rng.integers(-bound, bound + 1, size=n).astype(object) for _ in range(m)]
        vecs = [kazhdan_delta(basis[a], basis[b]) for a in range(m) for b in range(a, m)]
        dd = dense_rank(QQ, QQ.array(np.array(vecs, dtype=object)))
        report.expansion.append((m, dd))
    return report
