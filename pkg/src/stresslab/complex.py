"""Finite abstract simplicial complexes.

A complex is stored through its facets; every subset of a facet, including
the empty set, is a face.  Vertex labels are arbitrary hashable values
(usually ints or strings) and are ordered with :func:`label_key` so that
every enumeration is deterministic.
"""
from __future__ import annotations

import itertools
import json
from functools import cached_property
from typing import Hashable, Iterable, Sequence

import numpy as np

from .exactla import QQ, Field, dense_rank

Face = frozenset


def label_key(v) -> tuple:
    if isinstance(v, (bool, np.bool_)):
        return (2, str(v))
    if isinstance(v, (int, np.integer)):
        return (0, int(v), "")
    return (1, 0, str(v))


def face_key(f: Iterable) -> tuple:
    s = sorted(f, key=label_key)
    return (len(s), [label_key(v) for v in s])


def sorted_face(f: Iterable) -> tuple:
    return tuple(sorted(f, key=label_key))


def _antichain(faces: Iterable[frozenset]) -> list[frozenset]:
    faces = sorted(set(faces), key=lambda f: -len(f))
    kept: list[frozenset] = []
    for f in faces:
        if not any(f <= g for g in kept):
            kept.append(f)
    return sorted(kept, key=face_key)


class SimplicialComplex:
    """Immutable simplicial complex given by its facets.

    ``SimplicialComplex([])`` is the complex whose only face is the empty
    set; it has dimension -1.
    """

    def __init__(self, facets: Iterable[Iterable[Hashable]] = ()):
        fs = [frozenset(f) for f in facets]
        if not fs:
            fs = [frozenset()]
        self.facets: tuple[frozenset, ...] = tuple(_antichain(fs))
        verts = set().union(*self.facets)
        self.vertices: tuple = tuple(sorted(verts, key=label_key))
        self.index = {v: i for i, v in enumerate(self.vertices)}

    # ---------------------------------------------------------------- basics
    @classmethod
    def from_facets(cls, facets) -> "SimplicialComplex":
        return cls(facets)

    def __repr__(self) -> str:
        return f"SimplicialComplex(n={self.n}, dim={self.dim}, f={self.f_vector})"

    def __eq__(self, other) -> bool:
        return isinstance(other, SimplicialComplex) and set(self.facets) == set(other.facets)

    def __hash__(self) -> int:
        return hash(frozenset(self.facets))

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def dim(self) -> int:
        return max(len(f) for f in self.facets) - 1

    @property
    def is_pure(self) -> bool:
        return len({len(f) for f in self.facets}) == 1

    @property
    def is_empty(self) -> bool:
        """True when the only face is the empty set."""
        return self.dim < 0

    @cached_property
    def _faces_by_size(self) -> dict[int, list[frozenset]]:
        seen: set[frozenset] = set()
        for f in self.facets:
            items = sorted(f, key=label_key)
            for r in range(len(items) + 1):
                seen.update(frozenset(c) for c in itertools.combinations(items, r))
        out: dict[int, list[frozenset]] = {}
        for s in seen:
            out.setdefault(len(s), []).append(s)
        return {k: sorted(v, key=face_key) for k, v in sorted(out.items())}

    def faces(self, k: int | None = None) -> list[frozenset]:
        """Faces of dimension ``k`` (all faces when ``k`` is None)."""
        if k is None:
            return [f for s in sorted(self._faces_by_size) for f in self._faces_by_size[s]]
        return list(self._faces_by_size.get(k + 1, []))

    @cached_property
    def face_set(self) -> frozenset:
        return frozenset(self.faces())

    def is_face(self, sigma: Iterable) -> bool:
        return frozenset(sigma) in self.face_set

    def __contains__(self, sigma) -> bool:
        return self.is_face(sigma)

    @cached_property
    def f_vector(self) -> tuple[int, ...]:
        """(f_0, ..., f_dim); the empty face is not listed."""
        return tuple(len(self._faces_by_size.get(k + 1, [])) for k in range(self.dim + 1))

    def f(self, k: int) -> int:
        """Number of ``k``-faces, with f(-1) = 1."""
        return len(self._faces_by_size.get(k + 1, []))

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * x for k, x in enumerate(self.f_vector))

    def _check_face(self, sigma) -> frozenset:
        sigma = frozenset(sigma)
        if sigma not in self.face_set:
            raise ValueError(f"{sorted_face(sigma)} is not a face")
        return sigma

    def is_subcomplex_of(self, other: "SimplicialComplex") -> bool:
        return all(other.is_face(f) for f in self.facets)

    # ----------------------------------------------------- local operations
    def star(self, sigma=()) -> "SimplicialComplex":
        """Closed star: the facets containing ``sigma`` and their faces."""
        sigma = self._check_face(sigma)
        return SimplicialComplex([f for f in self.facets if sigma <= f])

    def link(self, sigma) -> "SimplicialComplex":
        sigma = self._check_face(sigma)
        return SimplicialComplex([f - sigma for f in self.facets if sigma <= f])

    def deletion(self, sigma) -> "SimplicialComplex":
        """Largest subcomplex not containing ``sigma``."""
        sigma = self._check_face(sigma)
        if not sigma:
            return SimplicialComplex([])
        out = []
        for f in self.facets:
            if sigma <= f:
                out.extend(f - {v} for v in sigma)
            else:
                out.append(f)
        return SimplicialComplex(out)

    def open_star(self, sigma) -> "RelativeComplex":
        """The faces containing ``sigma``, as the pair (St, St - sigma)."""
        st = self.star(sigma)
        return RelativeComplex(st, st.deletion(sigma))

    def induced(self, vertices: Iterable) -> "SimplicialComplex":
        w = frozenset(vertices)
        return SimplicialComplex([f & w for f in self.facets])

    def restrict(self, faces: Iterable[Iterable]) -> "SimplicialComplex":
        """Subcomplex generated by the given faces, which must be faces."""
        faces = [self._check_face(f) for f in faces]
        return SimplicialComplex(faces)

    def union(self, other: "SimplicialComplex") -> "SimplicialComplex":
        return SimplicialComplex(list(self.facets) + list(other.facets))

    def intersection(self, other: "SimplicialComplex") -> "SimplicialComplex":
        return SimplicialComplex([f & g for f in self.facets for g in other.facets])

    def skeleton(self, k: int) -> "SimplicialComplex":
        return SimplicialComplex(self.faces(k) + [f for f in self.facets if len(f) <= k + 1])

    def relabel(self, mapping) -> "SimplicialComplex":
        return SimplicialComplex([{mapping[v] for v in f} for f in self.facets])

    # -------------------------------------------------------- constructions
    def fresh_label(self):
        ints = [v for v in self.vertices if isinstance(v, (int, np.integer))]
        if len(ints) == len(self.vertices):
            return max(ints, default=-1) + 1
        i = 0
        while f"v{i}" in self.index:
            i += 1
        return f"v{i}"

    def stellar_subdivide(self, sigma, new_vertex=None) -> "SimplicialComplex":
        sigma = self._check_face(sigma)
        if len(sigma) < 2:
            raise ValueError("stellar subdivision at a vertex or the empty face changes nothing")
        if new_vertex is None:
            new_vertex = self.fresh_label()
        elif new_vertex in self.index:
            raise ValueError(f"label {new_vertex!r} already in use")
        st = self.star(sigma)
        rim = st.deletion(sigma)  # boundary of the closed star
        cone = [f | {new_vertex} for f in rim.facets if not (sigma <= f)]
        return SimplicialComplex(list(self.deletion(sigma).facets) + cone)

    def cone(self, apex=None) -> "SimplicialComplex":
        if apex is None:
            apex = self.fresh_label()
        return SimplicialComplex([f | {apex} for f in self.facets])

    def boundary(self) -> "SimplicialComplex":
        """Ridges lying in exactly one facet (pure complexes only)."""
        if not self.is_pure:
            raise ValueError("boundary needs a pure complex")
        count: dict[frozenset, int] = {}
        for f in self.facets:
            for v in f:
                r = f - {v}
                count[r] = count.get(r, 0) + 1
        return SimplicialComplex([r for r, c in count.items() if c == 1])

    def orientation(self) -> dict[frozenset, int] | None:
        """Coherent signs for the facets of a pure pseudomanifold.

        The sign refers to the vertex order given by :func:`label_key`.
        Returns None for a non-orientable (or branching) complex.  Each
        strongly connected component gets +1 on its smallest facet.
        """
        if not self.is_pure or self.dim < 0:
            return None
        ridges: dict[frozenset, list[frozenset]] = {}
        for f in self.facets:
            for v in f:
                ridges.setdefault(f - {v}, []).append(f)
        if any(len(fs) > 2 for fs in ridges.values()):
            return None

        def induced_sign(f, r):
            (a,) = f - r
            return (-1) ** sorted_face(f).index(a)

        sign: dict[frozenset, int] = {}
        for start in self.facets:
            if start in sign:
                continue
            sign[start] = 1
            stack = [start]
            while stack:
                f = stack.pop()
                for v in sorted(f, key=label_key):
                    r = f - {v}
                    for g in ridges[r]:
                        if g == f:
                            continue
                        want = -sign[f] * induced_sign(f, r) * induced_sign(g, r)
                        if g in sign:
                            if sign[g] != want:
                                return None
                        else:
                            sign[g] = want
                            stack.append(g)
        return sign

    # -------------------------------------------------------------- homology
    def boundary_matrix(self, k: int, field: Field = QQ) -> np.ndarray:
        """Matrix of the map C_k -> C_{k-1} (rows: k-faces, columns: (k-1)-faces)."""
        rows = self.faces(k)
        cols = self.faces(k - 1)
        idx = {f: i for i, f in enumerate(cols)}
        m = np.zeros((len(rows), len(cols)), dtype=np.int64)
        for i, f in enumerate(rows):
            s = sorted_face(f)
            for j, v in enumerate(s):
                m[i, idx[f - {v}]] = (-1) ** j
        if field is QQ:
            return QQ.array(m)
        return field.reduce(m)

    def betti(self, field: Field = QQ) -> tuple[int, ...]:
        """Reduced Betti numbers (b_{-1}, b_0, ..., b_dim)."""
        top = self.dim
        ranks = {}
        for k in range(0, top + 1):
            m = self.boundary_matrix(k, field)
            ranks[k] = dense_rank(field, m) if m.size else 0
        ranks[top + 1] = 0
        out = []
        for k in range(-1, top + 1):
            ck = self.f(k)
            out.append(ck - ranks.get(k, 0) - ranks[k + 1])
        return tuple(out)

    def reduced_betti(self, k: int, field: Field = QQ) -> int:
        if k < -1 or k > self.dim:
            return 0
        return self.betti(field)[k + 1]

    def _sphere_betti(self, field, m: int) -> bool:
        b = self.betti(field)
        if self.dim != m:
            return False
        return all(x == (1 if i - 1 == m else 0) for i, x in enumerate(b))

    def is_homology_manifold(self, field: Field = QQ, boundary: bool = False) -> bool:
        """Every nonempty face link has the homology of a sphere of the right dimension.

        With ``boundary=True`` links may instead be acyclic (homology balls).
        """
        if self.dim < 0 or not self.is_pure:
            return False
        d = self.dim
        for sigma in self.faces():
            if not sigma:
                continue
            lk = self.link(sigma)
            m = d - len(sigma)
            if lk._sphere_betti(field, m):
                continue
            if boundary and lk.dim == m and all(x == 0 for x in lk.betti(field)):
                continue
            return False
        return True

    def is_homology_sphere(self, field: Field = QQ) -> bool:
        return self._sphere_betti(field, self.dim) and self.is_homology_manifold(field)

    # --------------------------------------------------- L-decomposability
    def l_decomposition(self) -> list | None:
        """Vertex removal order certifying L-decomposability, or None.

        The list holds the removed vertices in order followed by the vertices
        of the final simplex.  Search is full backtracking with memoisation.
        """
        if not self.is_pure:
            raise ValueError("L-decomposability is defined for pure complexes")
        memo: dict = {}
        res = _l_decompose(self, memo)
        return None if res is None else list(res)

    # -------------------------------------------------------------------- I/O
    def to_text(self) -> str:
        lines = [" ".join(str(v) for v in sorted_face(f)) for f in self.facets]
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps({"facets": [[_jsonable(v) for v in sorted_face(f)] for f in self.facets]})


class RelativeComplex:
    """A pair (Delta, Gamma) with Gamma a subcomplex of Delta.

    ``gamma`` may be None, meaning the void complex (not even the empty face).
    """

    def __init__(self, delta: SimplicialComplex, gamma: SimplicialComplex | None):
        if gamma is not None and not gamma.is_subcomplex_of(delta):
            raise ValueError("second complex is not a subcomplex of the first")
        self.delta = delta
        self.gamma = gamma

    def faces(self) -> list[frozenset]:
        g = self.gamma.face_set if self.gamma is not None else frozenset()
        return [f for f in self.delta.faces() if f not in g]

    def __repr__(self) -> str:
        return f"RelativeComplex({self.delta!r}, {self.gamma!r})"


def _jsonable(v):
    return int(v) if isinstance(v, (int, np.integer)) else str(v)


def _l_decompose(c: SimplicialComplex, memo: dict):
    key = (c.dim, frozenset(c.facets))
    if key in memo:
        return memo[key]
    memo[key] = None  # guard against cycles
    if len(c.facets) == 1:
        res = tuple(sorted_face(c.facets[0]))
        memo[key] = res
        return res
    d = c.dim
    for v in c.vertices:
        rest = c.deletion({v})
        if rest.dim != d or not rest.is_pure:
            continue
        lk = c.link({v})
        bd = lk.boundary() if lk.is_pure else None
        if bd is None:
            continue
        if not bd.is_empty:
            if bd.dim != d - 2 or not bd.is_pure or _l_decompose(bd, memo) is None:
                continue
        tail = _l_decompose(rest, memo)
        if tail is not None:
            res = (v,) + tail
            memo[key] = res
            return res
    return None


# ---------------------------------------------------------------- generators

def boundary_simplex(d: int) -> SimplicialComplex:
    """Boundary of the d-simplex, vertices 0..d."""
    if d < 1:
        raise ValueError("need d >= 1")
    verts = range(d + 1)
    return SimplicialComplex(itertools.combinations(verts, d))


def boundary_crosspolytope(d: int) -> SimplicialComplex:
    """Boundary of the d-dimensional cross-polytope.

    Vertex ``2i`` sits at +e_i and ``2i+1`` at -e_i (i = 0..d-1).
    """
    if d < 1:
        raise ValueError("need d >= 1")
    return SimplicialComplex(
        [{2 * i + s for i, s in enumerate(bits)} for bits in itertools.product((0, 1), repeat=d)]
    )


def cyclic_polytope_boundary(n: int, d: int) -> SimplicialComplex:
    """Boundary of the cyclic d-polytope on vertices 1..n (Gale evenness)."""
    if not (n > d >= 2):
        raise ValueError("need n > d >= 2")
    facets = []
    for s in itertools.combinations(range(1, n + 1), d):
        ss = set(s)
        ok = True
        for i, j in itertools.combinations([x for x in range(1, n + 1) if x not in ss], 2):
            between = sum(1 for x in s if i < x < j)
            if between % 2:
                ok = False
                break
        if ok:
            facets.append(s)
    return SimplicialComplex(facets)


def moebius_torus_7() -> SimplicialComplex:
    """The 7-vertex triangulation of the torus."""
    facets = []
    for i in range(7):
        facets.append({i, (i + 1) % 7, (i + 3) % 7})
        facets.append({i, (i + 2) % 7, (i + 3) % 7})
    return SimplicialComplex(facets)


def icosahedron() -> SimplicialComplex:
    """Boundary of the icosahedron: apex 0, rings 1..5 and 6..10, apex 11."""
    facets = []
    for i in range(5):
        u, u1 = 1 + i, 1 + (i + 1) % 5
        w, w1 = 6 + i, 6 + (i + 1) % 5
        facets += [{0, u, u1}, {11, w, w1}, {u, u1, w}, {u1, w, w1}]
    return SimplicialComplex(facets)


def cycle(n: int) -> SimplicialComplex:
    return SimplicialComplex([{i, (i + 1) % n} for i in range(n)])


def stacked_sphere(dim: int, steps: int, seed: int) -> SimplicialComplex:
    """Stacked ``dim``-sphere: boundary of a simplex, then ``steps`` facet subdivisions."""
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 0x57AC]))
    c = boundary_simplex(dim + 1)
    for _ in range(steps):
        f = c.facets[int(rng.integers(len(c.facets)))]
        c = c.stellar_subdivide(f)
    return c


def join(a: SimplicialComplex, b: SimplicialComplex) -> SimplicialComplex:
    """Free join; labels of ``b`` are shifted if they clash with ``a``."""
    if set(a.vertices) & set(b.vertices):
        b = _relabel_apart(b, a)
    return SimplicialComplex([f | g for f in a.facets for g in b.facets])


def _relabel_apart(b: SimplicialComplex, a: SimplicialComplex) -> SimplicialComplex:
    if all(isinstance(v, (int, np.integer)) for v in a.vertices + b.vertices):
        off = max(a.vertices, default=-1) + 1 - min(b.vertices, default=0)
        return b.relabel({v: v + off for v in b.vertices})
    return b.relabel({v: f"{v}'" if f"{v}'" not in a.index else f"{v}''" for v in b.vertices})


def suspension(c: SimplicialComplex) -> SimplicialComplex:
    """Join with two fresh points."""
    a = c.fresh_label()
    b = SimplicialComplex([[a]]).fresh_label() if isinstance(a, int) else a + "'"
    return join(c, SimplicialComplex([{a}, {b}]))


def iterated_suspension(c: SimplicialComplex, i: int) -> SimplicialComplex:
    for _ in range(i):
        c = suspension(c)
    return c


def disjoint_union(a: SimplicialComplex, b: SimplicialComplex) -> SimplicialComplex:
    if set(a.vertices) & set(b.vertices):
        b = _relabel_apart(b, a)
    return SimplicialComplex(list(a.facets) + list(b.facets))


GENERATORS = {
    "boundary_simplex": boundary_simplex,
    "boundary_crosspolytope": boundary_crosspolytope,
    "cyclic": cyclic_polytope_boundary,
    "cyclic_polytope_boundary": cyclic_polytope_boundary,
    "moebius_torus_7": moebius_torus_7,
    "stacked_sphere": stacked_sphere,
    "icosahedron": icosahedron,
}


def generate(kind: str, *params) -> SimplicialComplex:
    try:
        fn = GENERATORS[kind]
    except KeyError:
        raise ValueError(f"unknown generator {kind!r}") from None
    return fn(*params)


# ---------------------------------------------------------------------- I/O

def _parse_label(tok: str):
    try:
        return int(tok)
    except ValueError:
        return tok


def parse_facets(text: str) -> SimplicialComplex:
    """Facet-list text: one facet per line, whitespace separated; '#' comments."""
    stripped = text.strip()
    if stripped.startswith("{"):
        data = json.loads(stripped)
        return SimplicialComplex([[_parse_label(str(v)) for v in f] for f in data["facets"]])
    facets = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            facets.append([_parse_label(t) for t in line.split()])
    return SimplicialComplex(facets)


def read_facets(path) -> SimplicialComplex:
    with open(path) as fh:
        return parse_facets(fh.read())


def write_facets(c: SimplicialComplex, path) -> None:
    with open(path, "w") as fh:
        fh.write(c.to_text())
