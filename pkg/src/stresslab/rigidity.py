"""Planar bar frameworks, Laman counts, and the ring-theoretic rigidity test.

A graph is read as a 1-dimensional complex with vertex coordinates in the
plane, i.e. two linear forms.  Its Artinian reduction has dim A^1 = n - 2,
and generic multiplication A^1 -> A^2 by a degree-one element is an
isomorphism exactly when the graph is Laman.  The rigidity matrix gives the
classical route to the same verdict.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

import numpy as np

from .artinian import build
from .complex import SimplicialComplex, label_key
from .exactla import QQ, Field, dense_rank
from .realization import (TAG_COORDS, TAG_ELEMENT, ImproperRealizationError, random_realization,
                          resolve_field, rng_for)
from .lefschetz import random_linear

log = logging.getLogger(__name__)

COORD_BOUND = 10**4


@dataclass(frozen=True)
class Graph:
    vertices: tuple
    edges: frozenset  # of 2-element frozensets

    @classmethod
    def from_edges(cls, edges, vertices=()) -> "Graph":
        es = set()
        for e in edges:
            u, v = tuple(e)
            if u == v:
                raise ValueError(f"loop at {u!r}")
            fe = frozenset((u, v))
            if fe in es:
                raise ValueError(f"repeated edge {u!r} {v!r}")
            es.add(fe)
        verts = set(vertices) | {v for e in es for v in e}
        return cls(tuple(sorted(verts, key=label_key)), frozenset(es))

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def e(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple]:
        return sorted((tuple(sorted(e, key=label_key)) for e in self.edges),
                      key=lambda t: (label_key(t[0]), label_key(t[1])))

    def induced_edge_count(self, w) -> int:
        ws = set(w)
        return sum(1 for e in self.edges if e <= ws)

    def complex(self) -> SimplicialComplex:
        return SimplicialComplex([set(e) for e in self.edges] + [{v} for v in self.vertices])

    def to_text(self) -> str:
        return "".join(f"{u} {v}\n" for u, v in self.sorted_edges())


def parse_edges(text: str) -> Graph:
    """Edge list, one "u v" pair per line; '#' starts a comment."""
    edges = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != 2:
            raise ValueError(f"bad edge line: {line!r}")
        edges.append(tuple(int(t) if t.lstrip("-").isdigit() else t for t in toks))
    return Graph.from_edges(edges)


def read_edges(path) -> Graph:
    with open(path) as fh:
        return parse_edges(fh.read())


def write_edges(g: Graph, path) -> None:
    with open(path, "w") as fh:
        fh.write(g.to_text())


# -------------------------------------------------------------- Laman

def _pebble_independent(g: Graph) -> tuple[bool, int]:
    """(2,3) pebble game; returns (all edges independent, number accepted)."""
    pebbles = {v: 2 for v in g.vertices}
    out: dict = {v: [] for v in g.vertices}

    def find(root, fixed) -> bool:
        # DFS along directed edges for a free pebble away from ``fixed``
        seen = {root, fixed}
        stack = [(root, iter(list(out[root])))]
        path = [root]
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                path.pop()
                continue
            if nxt in seen:
                continue
            seen.add(nxt)
            path.append(nxt)
            if pebbles[nxt] > 0:
                pebbles[nxt] -= 1
                for a, b in zip(path, path[1:]):  # reverse the path
                    out[a].remove(b)
                    out[b].append(a)
                pebbles[root] += 1
                return True
            stack.append((nxt, iter(list(out[nxt]))))
        return False

    accepted = 0
    ok = True
    for u, v in g.sorted_edges():
        while pebbles[u] < 2 and find(u, v):
            pass
        while pebbles[v] < 2 and find(v, u):
            pass
        if pebbles[u] + pebbles[v] == 4:
            pebbles[u] -= 1
            out[u].append(v)
            accepted += 1
        else:
            ok = False
    return ok, accepted


def is_laman(g: Graph) -> bool:
    """2n - 3 edges and no subgraph on x >= 2 vertices with more than 2x - 3."""
    if g.n < 2:
        return g.e == 0
    if g.e != 2 * g.n - 3:
        return False
    return _pebble_independent(g)[0]


def is_laman_bruteforce(g: Graph) -> bool:
    """Subset-count definition, exponential; for cross-checking small graphs."""
    if g.n < 2:
        return g.e == 0
    if g.e != 2 * g.n - 3:
        return False
    for x in range(2, g.n + 1):
        for w in itertools.combinations(g.vertices, x):
            if g.induced_edge_count(w) > 2 * x - 3:
                return False
    return True


# ---------------------------------------------------------- frameworks

@dataclass(frozen=True, eq=False)
class Framework:
    graph: Graph
    coords: np.ndarray  # 2 x n, columns follow graph.vertices
    field: Field = QQ

    def __post_init__(self):
        if self.coords.shape != (2, self.graph.n):
            raise ValueError(f"need 2 x {self.graph.n} coordinates")
        idx = {v: i for i, v in enumerate(self.graph.vertices)}
        for e in self.graph.edges:
            u, v = tuple(e)
            if np.array_equal(self.coords[:, idx[u]], self.coords[:, idx[v]]):
                raise ValueError(f"edge {u!r} {v!r} has coincident endpoints")

    def position(self, v) -> np.ndarray:
        return self.coords[:, self.graph.vertices.index(v)]


def random_framework(g: Graph, seed: int = 0, field: Field = QQ, bound: int = COORD_BOUND,
                     trial: int = 0, max_tries: int = 20) -> Framework:
    for attempt in range(max_tries):
        rng = rng_for(seed, TAG_COORDS, trial, attempt)
        raw = rng.integers(-bound, bound + 1, size=(2, g.n))
        try:
            return Framework(g, field.array(raw.astype(object)), field)
        except ValueError:
            log.info("degenerate planar coordinates, resampling (attempt %d)", attempt)
    raise ImproperRealizationError("could not place the framework generically")


def rigidity_matrix(f: Framework) -> np.ndarray:
    """e x 2n matrix; the row of uv holds p_u - p_v in u's block and p_v - p_u in v's."""
    fld = f.field
    g = f.graph
    idx = {v: i for i, v in enumerate(g.vertices)}
    m = fld.zeros((g.e, 2 * g.n))
    for r, (u, v) in enumerate(g.sorted_edges()):
        diff = fld.add(f.coords[:, idx[u]], fld.neg(f.coords[:, idx[v]]))
        m[r, 2 * idx[u]: 2 * idx[u] + 2] = diff
        m[r, 2 * idx[v]: 2 * idx[v] + 2] = fld.neg(diff)
    return m


def rigidity_rank(f: Framework) -> int:
    m = rigidity_matrix(f)
    return dense_rank(f.field, m) if m.size else 0


def is_rigid(f: Framework) -> bool:
    n = f.graph.n
    return n < 2 or rigidity_rank(f) == 2 * n - 3


# --------------------------------------------------- the ring-side test

@dataclass
class RigidityBridge:
    laman: bool
    rigid: bool
    lefschetz: bool
    dims: tuple[int, int]
    rank: int
    field: str
    seed: int
    trials_used: int

    @property
    def consistent(self) -> bool:
        return self.laman == self.rigid == self.lefschetz

    def to_dict(self) -> dict:
        return {"laman": self.laman, "rigid": self.rigid, "lefschetz": self.lefschetz,
                "dims": list(self.dims), "rank": self.rank, "field": self.field,
                "seed": self.seed, "trials_used": self.trials_used, "consistent": self.consistent}


def lefschetz_rigidity_check(g: Graph, seed: int = 0, trials: int = 5,
                             field="fp:random") -> RigidityBridge:
    """Multiplication A^1(G) -> A^2(G) by a generic degree-one element, with G in the plane.

    The verdict is compared with the Laman count and with the rank of the
    rigidity matrix at random coordinates.  The graph must have 2n - 3 edges.
    """
    if g.e != 2 * g.n - 3:
        raise ValueError(f"need 2n - 3 = {2 * g.n - 3} edges, got {g.e}")
    fld = resolve_field(field, seed)
    c = g.complex()
    best = (False, (0, 0), -1, 0)
    for t in range(trials):
        r = random_realization(c, 2, seed, field=fld, trial=t)
        alg = build(c, r, check=False)
        ell = random_linear(fld, c.n, rng_for(seed, TAG_ELEMENT, t))
        m = alg.linear_matrix(ell, 1)
        rk = dense_rank(fld, m) if m.size else 0
        dims = (alg.dim(1), alg.dim(2))
        iso = rk == dims[0] == dims[1]
        best = (iso, dims, rk, t + 1)
        if iso:
            break
    rigid = False
    for t in range(trials):
        if is_rigid(random_framework(g, seed, fld, trial=t)):
            rigid = True
            break
    iso, dims, rk, used = best
    return RigidityBridge(is_laman(g), rigid, iso, dims, rk, fld.name, seed, used)


# ----------------------------------------------------------- Henneberg

def _fresh(g: Graph):
    ints = [v for v in g.vertices if isinstance(v, int)]
    return max(ints, default=-1) + 1


def henneberg(g: Graph, move: int, params, new_vertex=None) -> Graph:
    """Apply a Henneberg move.

    Move 1 with params (a, b): new vertex joined to a and b.  Move 2 with
    params ((a, b), c): the edge ab is replaced by a new vertex joined to
    a, b and c.
    """
    v = _fresh(g) if new_vertex is None else new_vertex
    if v in g.vertices:
        raise ValueError(f"vertex {v!r} already present")
    if move == 1:
        a, b = params
        if a == b or a not in g.vertices or b not in g.vertices:
            raise ValueError("move 1 needs two distinct existing vertices")
        return Graph.from_edges(list(g.edges) + [(v, a), (v, b)], g.vertices)
    if move == 2:
        (a, b), c = params
        e = frozenset((a, b))
        if e not in g.edges:
            raise ValueError(f"{a!r} {b!r} is not an edge")
        if c in (a, b) or c not in g.vertices:
            raise ValueError("move 2 needs a third existing vertex")
        edges = [x for x in g.edges if x != e] + [(v, a), (v, b), (v, c)]
        return Graph.from_edges(edges, g.vertices)
    raise ValueError(f"unknown move {move!r}")


def random_henneberg(steps: int, seed: int = 0) -> Graph:
    """Random Henneberg sequence started from a single edge."""
    rng = rng_for(seed, TAG_COORDS, 0xBEEF)
    g = Graph.from_edges([(0, 1)])
    for _ in range(steps):
        if g.n >= 3 and rng.random() < 0.5:
            edges = g.sorted_edges()
            a, b = edges[int(rng.integers(len(edges)))]
            others = [x for x in g.vertices if x not in (a, b)]
            c = others[int(rng.integers(len(others)))]
            g = henneberg(g, 2, ((a, b), c))
        else:
            a, b = rng.choice(len(g.vertices), size=2, replace=False)
            g = henneberg(g, 1, (g.vertices[int(a)], g.vertices[int(b)]))
    return g


def random_graph(n: int, e: int, rng: np.random.Generator) -> Graph:
    pairs = list(itertools.combinations(range(n), 2))
    pick = rng.choice(len(pairs), size=e, replace=False)
    return Graph.from_edges([pairs[i] for i in sorted(pick)], range(n))


def all_graphs(n: int, e: int):
    """Every labelled graph on range(n) with e edges (no isomorphism reduction)."""
    pairs = list(itertools.combinations(range(n), 2))
    for es in itertools.combinations(pairs, e):
        yield Graph.from_edges(es, range(n))


def graph_corpus(max_n: int = 8, sample: int = 500, seed: int = 0, exhaustive_upto: int = 4) -> list[Graph]:
    """Graphs with e = 2n - 3: all labelled ones up to ``exhaustive_upto`` vertices,
    then a fixed random sample (half uniform, half Henneberg-built) up to ``max_n``.
    """
    out = []
    for n in range(2, exhaustive_upto + 1):
        out.extend(all_graphs(n, 2 * n - 3))
    rng = rng_for(seed, TAG_COORDS, 0xC0DE)
    sizes = list(range(exhaustive_upto + 1, max_n + 1))
    for i in range(max(0, sample - len(out))):
        n = sizes[i % len(sizes)] if sizes else max_n
        if i % 2:
            out.append(random_henneberg(n - 2, seed=int(rng.integers(2**31))))
        else:
            out.append(random_graph(n, 2 * n - 3, rng))
    return out
