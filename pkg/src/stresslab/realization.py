"""Vertex coordinates, properness, and projections.

A realization assigns each vertex of a complex a column vector in
``field^l``; its rows are the linear forms theta_1..theta_l.  All sampling
goes through :func:`rng_for` so that a (seed, tags) pair pins every random
draw.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from .complex import SimplicialComplex, label_key, sorted_face
from .exactla import QQ, Field, PrimeField, dense_nullspace, dense_rank

DEFAULT_BOUND = 10**6

# tags separating independent random streams derived from one seed
TAG_COORDS = 1
TAG_ELEMENT = 2
TAG_SUBSPACE = 3
TAG_SCALAR = 4
TAG_PRIME = 5


class ImproperRealizationError(ValueError):
    pass


def rng_for(seed: int, *tags: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, tags)]))


@dataclass(frozen=True, eq=False)
class Realization:
    complex: SimplicialComplex
    field: Field
    coords: np.ndarray  # l x n, columns follow complex.vertices
    seed: int | None = None

    @property
    def l(self) -> int:
        return self.coords.shape[0]

    def column(self, v) -> np.ndarray:
        return self.coords[:, self.complex.index[v]]

    def columns(self, face) -> np.ndarray:
        idx = [self.complex.index[v] for v in sorted_face(face)]
        return self.coords[:, idx]

    def restrict(self, sub: SimplicialComplex) -> "Realization":
        idx = [self.complex.index[v] for v in sub.vertices]
        return Realization(sub, self.field, self.coords[:, idx], self.seed)

    def on(self, other: SimplicialComplex) -> "Realization":
        """Same coordinates attached to another complex on a subset of the vertices."""
        return self.restrict(other)

    def is_proper(self) -> bool:
        return is_proper(self)

    def to_json(self) -> str:
        f = self.field
        data = {str(v): [f.to_str(x) for x in self.coords[:, i]]
                for i, v in enumerate(self.complex.vertices)}
        return json.dumps({"vertices": data, "field": f.name}, sort_keys=False)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Realization) and self.complex == other.complex
                and self.field == other.field and np.array_equal(self.coords, other.coords))


def is_proper(r: Realization) -> bool:
    """Every face with at most ``l`` vertices maps to independent vectors."""
    c, f, l = r.complex, r.field, r.l
    seen: set[frozenset] = set()
    for facet in c.facets:
        if len(facet) <= l:
            cands = [facet]
        else:
            cands = [frozenset(s) for s in itertools.combinations(sorted_face(facet), l)]
        for s in cands:
            if s in seen:
                continue
            seen.add(s)
            if not s:
                continue
            if dense_rank(f, r.columns(s)) != len(s):
                return False
    return True


def from_matrix(c: SimplicialComplex, coords, field: Field = QQ, seed=None) -> Realization:
    arr = field.array(np.asarray(coords, dtype=object))
    if arr.ndim != 2 or arr.shape[1] != c.n:
        raise ValueError(f"need an l x {c.n} coordinate matrix")
    return Realization(c, field, arr, seed)


def from_dict(c: SimplicialComplex, coords: dict, field: Field = QQ) -> Realization:
    cols = [coords[v] for v in c.vertices]
    return from_matrix(c, np.array(cols, dtype=object).T, field)


def sample_coords(rng: np.random.Generator, field: Field, l: int, n: int, bound: int) -> np.ndarray:
    if isinstance(field, PrimeField):
        return field.random(rng, (l, n))
    return field.array(rng.integers(-bound, bound + 1, size=(l, n)))


def random_realization(c: SimplicialComplex, l: int, seed: int, bound: int = DEFAULT_BOUND,
                       field: Field = QQ, max_tries: int = 50, trial: int = 0) -> Realization:
    """Seeded random coordinates, resampled until proper."""
    for attempt in range(max_tries):
        rng = rng_for(seed, TAG_COORDS, trial, attempt)
        r = Realization(c, field, sample_coords(rng, field, l, c.n, bound), seed)
        if is_proper(r):
            return r
    raise ImproperRealizationError(f"no proper realization in dimension {l} after {max_tries} draws")


def realization_from_json(c: SimplicialComplex, text: str, field: Field = QQ) -> Realization:
    data = json.loads(text)["vertices"]
    lookup = {str(k): v for k, v in data.items()}
    try:
        cols = [lookup[str(v)] for v in c.vertices]
    except KeyError as e:
        raise ValueError(f"no coordinates for vertex {e.args[0]}") from None
    return from_matrix(c, np.array(cols, dtype=object).T, field)


# ---------------------------------------------------------- fixed instances

def special_realization_bad_reduction(field: Field = QQ):
    """Tetrahedron boundary subdivided at every triangle, with a special realization.

    Vertex ``i + 4`` subdivides the triangle opposite ``i``.  Vertices 1..4
    lie in the plane z = 0 with pairwise independent positions; the new
    vertices sit off that plane.  Returns (complex, realization, original
    tetrahedron boundary).
    """
    tet = SimplicialComplex([{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}])
    c = tet
    for i in (1, 2, 3, 4):
        c = c.stellar_subdivide({1, 2, 3, 4} - {i}, new_vertex=i + 4)
    coords = {
        1: (1, 0, 0), 2: (0, 1, 0), 3: (1, 1, 0), 4: (1, -1, 0),
        5: (2, 3, 1), 6: (-1, 4, 2), 7: (3, -2, 5), 8: (1, 1, -3),
    }
    return c, from_dict(c, coords, field), tet


def circle_example(field: Field = QQ):
    """4-cycle at (1,0), (0,1), (-1,0), (0,-1) in cyclic order."""
    c = SimplicialComplex([{0, 1}, {1, 2}, {2, 3}, {3, 0}])
    coords = {0: (1, 0), 1: (0, 1), 2: (-1, 0), 3: (0, -1)}
    return c, from_dict(c, coords, field)


def crosspolytope_realization(c: SimplicialComplex, field: Field = QQ) -> Realization:
    """Unit coordinates +-e_i for :func:`boundary_crosspolytope` labels."""
    d = c.n // 2
    coords = np.zeros((d, c.n), dtype=np.int64)
    for j, v in enumerate(c.vertices):
        coords[v // 2, j] = 1 if v % 2 == 0 else -1
    return from_matrix(c, coords, field)


# ---------------------------------------------------------------- projection

@dataclass(frozen=True, eq=False)
class ProjectionData:
    projection: Realization  # coordinates in a basis of the hyperplane
    height: np.ndarray       # one scalar per vertex
    direction: np.ndarray
    basis: np.ndarray        # (l-1) x l rows spanning the orthogonal complement of direction
    proper: bool


def project_and_height(r: Realization, direction, sub: SimplicialComplex | None = None) -> ProjectionData:
    """Orthogonal projection along ``direction`` plus the height over the hyperplane.

    Each column w splits as ``w = pi(w) + h(w) * direction``; the projection
    is reported in coordinates ``basis @ w`` where the rows of ``basis`` span
    the orthogonal complement.  ``sub`` selects the complex the projected
    realization lives on (default: the whole complex).
    """
    f = r.field
    u = f.array(np.asarray(direction, dtype=object).reshape(-1))
    if u.shape[0] != r.l:
        raise ValueError("direction has the wrong length")
    if not np.any(u != 0):
        raise ValueError("direction must be nonzero")
    uu = f.matmul(u, u)
    if uu == 0:
        raise ValueError("direction is isotropic over this field; resample")
    basis = dense_nullspace(f, u[None, :])
    target = sub if sub is not None else r.complex
    base = r.restrict(target) if sub is not None else r
    proj = f.matmul(basis, base.coords)
    dots = f.matmul(u, base.coords)
    h = f.scale(f.inv(uu), dots) if isinstance(f, PrimeField) else dots * (1 / uu)
    pr = Realization(target, f, proj, r.seed)
    return ProjectionData(pr, h, u, basis, is_proper(pr))


def link_realization(r: Realization, v) -> Realization:
    """Link of vertex ``v`` realized by projecting along the position of ``v``."""
    lk = r.complex.link({v})
    return project_and_height(r, r.column(v), sub=lk).projection


def resolve_field(spec, seed: int = 0) -> Field:
    """Field object from a field or a string; ``fp:random`` draws its prime from ``seed``."""
    from .exactla import parse_field, RationalField

    if isinstance(spec, (PrimeField, RationalField)):
        return spec
    return parse_field(str(spec), rng_for(seed, TAG_PRIME))


def lift_to_rationals(r: Realization) -> Realization:
    """Same integer coordinates read over the rationals (prime-field residues in [0, p))."""
    if not isinstance(r.field, PrimeField):
        return r
    return Realization(r.complex, QQ, QQ.array(r.coords.astype(object)), r.seed)
