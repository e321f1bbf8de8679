"""Face-number arithmetic and the inequalities that the Lefschetz property implies.

Everything here is exact integer or rational arithmetic except the
homology ranks inside :func:`complexity_norms`, which run over a prime field
for speed (torsion-free complexes give the same numbers as over the
rationals).
"""
from __future__ import annotations

import csv
import io
import itertools
from dataclasses import asdict, dataclass, field as dc_field
from fractions import Fraction
from math import comb

import numpy as np

from .artinian import GradedAlgebra, build
from .complex import SimplicialComplex
from .exactla import GF, QQ, Field, PrimeField, dense_rank
from .realization import Realization, random_realization, resolve_field, rng_for, TAG_SUBSPACE

NOT_APPLICABLE = "NOT_APPLICABLE"
EXACT_CUTOFF = 18
HOMOLOGY_PRIME = 2**31 - 1


# ------------------------------------------------------------ f, h, g

def _f_full(f, d: int) -> list[int]:
    """Accept (f_0..f_{d-1}) or (1, f_0, .., f_{d-1}); return the latter."""
    f = [int(x) for x in f]
    if len(f) == d:
        return [1] + f
    if len(f) == d + 1 and f[0] == 1:
        return f
    raise ValueError(f"f-vector of length {len(f)} does not match d={d}")


def f_to_h(f, d: int) -> tuple[int, ...]:
    """h_k = sum_i (-1)^(k-i) C(d-i, k-i) f_{i-1}, for k = 0..d."""
    ff = _f_full(f, d)
    return tuple(sum((-1) ** (k - i) * comb(d - i, k - i) * ff[i] for i in range(k + 1))
                 for k in range(d + 1))


def h_to_f(h, d: int) -> tuple[int, ...]:
    """Inverse of :func:`f_to_h`; returns (f_0, .., f_{d-1})."""
    h = [int(x) for x in h]
    if len(h) != d + 1:
        raise ValueError(f"h-vector of length {len(h)} does not match d={d}")
    # f_{j-1} = sum_i C(d-i, j-i) h_i
    return tuple(sum(comb(d - i, j - i) * h[i] for i in range(j + 1)) for j in range(1, d + 1))


def h_vector(c: SimplicialComplex) -> tuple[int, ...]:
    return f_to_h(c.f_vector, c.dim + 1)


def g_from_h(h) -> tuple[int, ...]:
    d = len(h) - 1
    return tuple([h[0]] + [h[i] - h[i - 1] for i in range(1, d // 2 + 1)])


def g_vector(c: SimplicialComplex, certificate, realization: Realization | None = None) -> tuple[int, ...]:
    """g_i = dim A^i - rank(ell: A^(i-1) -> A^i) with the certificate's witness.

    The realization is regenerated from the certificate's seed and trial
    unless given explicitly.
    """
    if certificate is None or not certificate.passed:
        raise ValueError("g-vector needs a passing Lefschetz certificate")
    fld = resolve_field(certificate.field, certificate.seed)
    d = c.dim + 1
    r = realization if realization is not None else random_realization(
        c, d, certificate.seed, field=fld, trial=certificate.trial)
    alg = build(c, r, check=False)
    ell = fld.array(np.array([Fraction(x) if not isinstance(fld, PrimeField) else int(x)
                              for x in certificate.ell], dtype=object))
    g = [alg.dim(0)]
    for i in range(1, d // 2 + 1):
        m = alg.linear_matrix(ell, i - 1)
        g.append(alg.dim(i) - (dense_rank(fld, m) if m.size else 0))
    return tuple(g)


def macaulay_representation(a: int, i: int) -> list[tuple[int, int]]:
    """Greedy i-binomial representation a = C(n_i, i) + C(n_{i-1}, i-1) + ..."""
    if a < 0 or i < 1:
        raise ValueError("need a >= 0 and i >= 1")
    out = []
    j = i
    while a > 0 and j > 0:
        n = j
        while comb(n + 1, j) <= a:
            n += 1
        out.append((n, j))
        a -= comb(n, j)
        j -= 1
    return out


def macaulay_bound(a: int, i: int) -> int:
    """a^<i>: the largest value allowed after a in degree i."""
    return sum(comb(n + 1, j + 1) for n, j in macaulay_representation(a, i))


def is_m_sequence(g) -> bool:
    """Macaulay's numerical test for Hilbert functions of standard graded algebras."""
    g = [int(x) for x in g]
    if not g or g[0] != 1 or any(x < 0 for x in g):
        return False
    return all(g[i + 1] <= macaulay_bound(g[i], i) for i in range(1, len(g) - 1))


# ------------------------------------------------------------------ GKS

@dataclass
class InequalityReport:
    name: str
    passed: bool
    lhs: object
    rhs: object
    details: dict = dc_field(default_factory=dict)

    @property
    def slack(self):
        return self.rhs - self.lhs

    def __bool__(self) -> bool:
        return self.passed

    def to_row(self) -> dict:
        return {"name": self.name, "passed": self.passed, "lhs": str(self.lhs), "rhs": str(self.rhs),
                "slack": str(self.slack)}


def gks_check(delta: SimplicialComplex, d: int, ambient: SimplicialComplex | None = None,
              realization: Realization | None = None, seed: int = 0, field="fp:random",
              algebra: GradedAlgebra | None = None) -> InequalityReport:
    """f_d <= (d+2) f_{d-1} for a complex of dimension at most d.

    With an ambient 2d-sphere containing ``delta``, the bound is also derived
    from the algebra: dim A^d(delta) <= f_{d-1}, dim A^(d+1)(delta) >=
    f_d - (d+1) f_{d-1}, and the ideal monotonicity kappa_d <= kappa_(d+1)
    together force the same inequality.  Pass ``algebra`` to reuse one
    reduction of the ambient sphere across many subcomplexes.
    """
    if delta.dim > d:
        raise ValueError(f"complex of dimension {delta.dim} exceeds d={d}")
    fd, fd1 = delta.f(d), delta.f(d - 1)
    rep = InequalityReport("gks", fd <= (d + 2) * fd1, fd, (d + 2) * fd1)
    if ambient is None:
        return rep
    if ambient.dim != 2 * d:
        raise ValueError("ambient sphere must have dimension 2d")
    if not delta.is_subcomplex_of(ambient):
        raise ValueError("not a subcomplex of the ambient sphere")
    if algebra is not None:
        if algebra.complex != ambient:
            raise ValueError("algebra does not belong to the ambient sphere")
        alg = algebra
    else:
        fld = realization.field if realization is not None else resolve_field(field, seed)
        r = realization if realization is not None else random_realization(ambient, 2 * d + 1, seed, field=fld)
        alg = build(ambient, r, check=False)
    sub = alg.sub_algebra(delta, top=d + 1)
    ideal = alg.ideal(delta)
    a_k, a_k1 = sub.dim(d), sub.dim(d + 1)
    k_k, k_k1 = ideal.dim(d), ideal.dim(d + 1)
    gen_bound = a_k <= fd1
    rel_bound = a_k1 >= fd - (d + 1) * fd1
    monotone = k_k <= k_k1
    derived = gen_bound and rel_bound and monotone
    # chaining: fd - (d+1) fd1 <= a_k1 <= a_k <= fd1
    rep.details.update({"dim_A_d": a_k, "dim_A_d1": a_k1, "kappa_d": k_k, "kappa_d1": k_k1,
                        "generator_bound": gen_bound, "relation_bound": rel_bound,
                        "monotone": monotone, "derived": derived,
                        "agrees": (not derived) or rep.passed})
    return rep


def gks_manifold_bound(delta: SimplicialComplex, m: SimplicialComplex, d: int,
                       field: Field | None = None) -> InequalityReport:
    """f_d <= (d+2) f_{d-1} + C(2d+1, d) b_d(M) for delta inside a closed 2d-manifold M."""
    if not delta.is_subcomplex_of(m):
        raise ValueError("not a subcomplex")
    b = m.reduced_betti(d, field if field is not None else QQ)
    fd, fd1 = delta.f(d), delta.f(d - 1)
    rhs = (d + 2) * fd1 + comb(2 * d + 1, d) * b
    return InequalityReport("gks-manifold", fd <= rhs, fd, rhs, {"b_d": b})


# --------------------------------------------------------------- Kuhnel

def kuhnel_check(m: SimplicialComplex, n: int | None = None,
                 field: Field | None = None) -> list[InequalityReport]:
    """C(d+1, j) b_{j-1}(M) <= C(n-d+j-2, j) for 1 <= j <= d/2 (reduced Betti numbers).

    ``n`` overrides the vertex count to probe how tight the bound is.
    """
    d = m.dim + 1
    n = m.n if n is None else n
    fld = field if field is not None else QQ
    betti = m.betti(fld)
    out = []
    for j in range(1, d // 2 + 1):
        b = betti[j]  # reduced b_{j-1}
        lhs = comb(d + 1, j) * b
        rhs = comb(n - d + j - 2, j) if n - d + j - 2 >= 0 else 0
        out.append(InequalityReport("kuhnel", lhs <= rhs, lhs, rhs, {"j": j, "b": b, "n": n}))
    return out


def kuhnel_complete_bound(n: int, k: int, b_k: int, offset: int = 1) -> InequalityReport:
    """C(n-k-offset, k+1) <= C(2k+1, k+1) b_k for a complete k-complex on n vertices.

    ``offset=1`` is the bound as derived from biased duality; ``offset=2``
    is the sharper original conjectured form.
    """
    top = n - k - offset
    lhs = comb(top, k + 1) if top >= 0 else 0
    rhs = comb(2 * k + 1, k + 1) * b_k
    return InequalityReport("kuhnel-complete", lhs <= rhs, lhs, rhs, {"n": n, "k": k, "offset": offset})


def crossing_formula(fd: int, fd1: int, d: int) -> Fraction:
    """f_d^(d+2) / ((d+3)^(d+2) f_{d-1}^(d+1)), without the applicability guard."""
    return Fraction(fd ** (d + 2), (d + 3) ** (d + 2) * fd1 ** (d + 1))


def crossing_bound(fd: int, fd1: int, d: int):
    """Lower bound on the d-th crossing number; applies only when f_d > (d+3) f_{d-1}."""
    if fd1 <= 0 or fd <= (d + 3) * fd1:
        return NOT_APPLICABLE
    return crossing_formula(fd, fd1, d)


# ----------------------------------------------------- complexity norms

def _components(c: SimplicialComplex) -> int:
    parent = {v: v for v in c.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in c.faces(1):
        a, b = tuple(e)
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    return len({find(v) for v in c.vertices})


def induced_betti(c: SimplicialComplex, w, k: int, field: Field) -> int:
    """Reduced b_k of the subcomplex induced on w."""
    sub = c.induced(w)
    if k == 0:
        return _components(sub) - 1 if sub.n else 0
    if k == -1:
        return 1 if sub.n == 0 else 0
    return sub.reduced_betti(k, field)


@dataclass
class NormReport:
    k: int
    mode: str
    one_norm: dict          # m -> sum (exact) or estimate (sampled)
    inf_norm: int
    argmax: list | None
    samples: int
    g_k: int | None = None
    bound_ok: bool | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["one_norm"] = {str(m): str(v) for m, v in self.one_norm.items()}
        return d


def complexity_norms(c: SimplicialComplex, k: int, m_cap: int | None = None,
                     sample_budget: int = 2000, seed: int = 0, g_k: int | None = None,
                     exact_cutoff: int = EXACT_CUTOFF, field: Field | None = None) -> NormReport:
    """1-norms sum_{|W|=m} b_{k-1}(c|W) and the sup-norm max_W b_{k-1}(c|W).

    Exact over all vertex subsets up to ``exact_cutoff`` vertices, sampled
    uniformly (size first, then subset) above it.  With ``g_k`` the sup-norm
    is checked against it.
    """
    fld = field if field is not None else GF(HOMOLOGY_PRIME)
    n = c.n
    m_cap = n if m_cap is None else min(m_cap, n)
    verts = c.vertices
    one: dict = {}
    best, arg = 0, None
    if n <= exact_cutoff:
        mode, count = "exact", 0
        for m in range(1, n + 1):
            total = 0
            for w in itertools.combinations(verts, m):
                b = induced_betti(c, w, k - 1, fld)
                count += 1
                total += b
                if b > best:
                    best, arg = b, list(w)
            if m <= m_cap:
                one[m] = total
    else:
        mode, count = "sampled", sample_budget
        rng = rng_for(seed, TAG_SUBSPACE)
        sums = {m: [0, 0] for m in range(1, m_cap + 1)}
        for _ in range(sample_budget):
            m = int(rng.integers(1, m_cap + 1))
            idx = sorted(rng.choice(n, size=m, replace=False).tolist())
            w = [verts[i] for i in idx]
            b = induced_betti(c, w, k - 1, fld)
            sums[m][0] += b
            sums[m][1] += 1
            if b > best:
                best, arg = b, w
        one = {m: (Fraction(s, t) * comb(n, m) if t else Fraction(0)) for m, (s, t) in sums.items()}
    ok = None if g_k is None else best <= g_k
    return NormReport(k, mode, one, best, None if arg is None else [str(v) for v in arg], count, g_k, ok)


# ------------------------------------------------------------ export

def reports_to_csv(reports, path=None) -> str:
    """Write inequality reports as CSV; returns the text."""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=["name", "passed", "lhs", "rhs", "slack"], lineterminator="\n")
    w.writeheader()
    for r in reports:
        w.writerow(r.to_row())
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text

