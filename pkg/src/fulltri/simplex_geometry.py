"""Directed simplices, rotated simplices and directed rectified simplices.

Vertices of the rectified simplex ``R_n`` are pairs ``(i, j)`` with
``0 <= i < j <= n``; edges are triples ``(i, j, k)`` with ``j < k`` and
``i`` different from both.  An edge is *plain* (shift 0) when ``i < j`` or
``k < i`` and *wavy* (shift 1, reversed) when ``j < i < k``::

    i < j      :  a_{i,j} -> a_{i,k}
    k < i      :  a_{j,i} -> a_{k,i}
    j < i < k  :  a_{i,k} ~> a_{j,i}     (a map into a_{j,i}[1])
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

Vertex = tuple[int, int]
Edge = tuple[int, int, int]


# ------------------------------------------------------------- rectified

def edge_ends(e: Edge) -> tuple[Vertex, Vertex, int]:
    """``(source, target, shift)`` of the rectified edge ``e_{i,j,k}``."""
    i, j, k = e
    if not (j < k and i != j and i != k):
        raise ValueError(f"not a rectified edge: {e}")
    if i < j:
        return (i, j), (i, k), 0
    if k < i:
        return (j, i), (k, i), 0
    return (i, k), (j, i), 1


def is_wavy(e: Edge) -> bool:
    return e[1] < e[0] < e[2]


@dataclass(frozen=True)
class RectifiedShape:
    n: int
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]

    def ends(self, e: Edge) -> tuple[Vertex, Vertex, int]:
        return edge_ends(e)

    def out_edges(self, v: Vertex) -> list[Edge]:
        return [e for e in self.edges if edge_ends(e)[0] == v]

    def in_edges(self, v: Vertex) -> list[Edge]:
        return [e for e in self.edges if edge_ends(e)[1] == v]

    def edge_between(self, a: Vertex, b: Vertex) -> Edge | None:
        for e in self.edges:
            s, t, _ = edge_ends(e)
            if s == a and t == b:
                return e
        return None


@lru_cache(maxsize=None)
def build_rectified_shape(n: int) -> RectifiedShape:
    if n < 1:
        raise ValueError("rectified simplex needs n >= 1")
    verts = tuple(combinations(range(n + 1), 2))
    edges = tuple((i, j, k) for i in range(n + 1) for j, k in combinations(range(n + 1), 2)
                  if i != j and i != k)
    return RectifiedShape(n, verts, edges)


def two_faces(n: int) -> list[tuple[int, int, int]]:
    """Index triples ``x < y < z``; each spans the 2-face
    ``a_{x,y} -> a_{x,z} -> a_{y,z} ~> a_{x,y}``."""
    return list(combinations(range(n + 1), 3))


def two_face_edges(x: int, y: int, z: int) -> tuple[Edge, Edge, Edge]:
    return (x, y, z), (z, x, y), (y, x, z)


# -------------------------------------------------------- directed simplex

@dataclass(frozen=True)
class DirectedSimplexShape:
    n: int
    m: int
    vertices: tuple[int, ...]
    edges: dict  # (source, target) -> shift

    @property
    def rotation(self) -> int:
        return self.m % (self.n + 1)

    def same_shape(self, other: "DirectedSimplexShape") -> bool:
        return self.n == other.n and self.edges == other.edges

    def order(self) -> list[int]:
        """Vertices listed along the directed polygon, source first."""
        r = self.rotation
        return list(range(r, self.n + 1)) + list(range(r))


def build_directed_simplex(n: int, m: int = 0) -> DirectedSimplexShape:
    if n < 0:
        raise ValueError("simplex dimension must be non-negative")
    r = m % (n + 1)
    edges = {}
    for a, b in combinations(range(n + 1), 2):
        if r and a < r <= b:
            edges[(b, a)] = 1
        else:
            edges[(a, b)] = 0
    return DirectedSimplexShape(n, m, tuple(range(n + 1)), edges)


# ------------------------------------------------------------------ faces

@dataclass(frozen=True)
class SimplexEmbedding:
    """Image of ``Delta_{n-1}^i`` in ``R_n``; vertex ``s`` goes to ``vertex_map[s]``."""

    index: int
    shape: DirectedSimplexShape
    vertex_map: dict
    edge_map: dict  # simplex edge (a, b) -> rectified edge

    @property
    def vertices(self) -> list[Vertex]:
        return [self.vertex_map[s] for s in self.shape.vertices]


@dataclass(frozen=True)
class RectifiedEmbedding:
    """``R_{n-1}`` inside ``R_n`` avoiding index ``i``."""

    index: int
    shape: RectifiedShape
    vertex_map: dict
    edge_map: dict

    @property
    def vertices(self) -> list[Vertex]:
        return [self.vertex_map[v] for v in self.shape.vertices]


def _insert(i: int, s: int) -> int:
    return s if s < i else s + 1


def _check_index(shape: RectifiedShape, i: int):
    if not 0 <= i <= shape.n:
        raise IndexError(f"face index {i} out of range for R_{shape.n}")


def face_simplex(shape: RectifiedShape, i: int) -> SimplexEmbedding:
    _check_index(shape, i)
    n = shape.n
    simplex = build_directed_simplex(n - 1, i)
    vmap = {}
    for s in simplex.vertices:
        t = _insert(i, s)
        vmap[s] = (min(i, t), max(i, t))
    emap = {}
    for (a, b), sh in simplex.edges.items():
        ta, tb = _insert(i, a), _insert(i, b)
        e = (i, min(ta, tb), max(ta, tb))
        src, tgt, esh = edge_ends(e)
        assert (src, tgt, esh) == (vmap[a], vmap[b], sh)
        emap[(a, b)] = e
    return SimplexEmbedding(i, simplex, vmap, emap)


def face_rectified(shape: RectifiedShape, i: int) -> RectifiedEmbedding:
    _check_index(shape, i)
    if shape.n < 2:
        raise ValueError("rectified faces need n >= 2")
    sub = build_rectified_shape(shape.n - 1)
    vmap = {(x, y): (_insert(i, x), _insert(i, y)) for x, y in sub.vertices}
    emap = {}
    for a, b, c in sub.edges:
        e = (_insert(i, a), _insert(i, b), _insert(i, c))
        src, tgt, sh = edge_ends(e)
        s0, t0, sh0 = edge_ends((a, b, c))
        assert (vmap[s0], vmap[t0], sh0) == (src, tgt, sh)
        emap[(a, b, c)] = e
    return RectifiedEmbedding(i, sub, vmap, emap)


def degeneracy_index(i: int, s: int) -> int:
    """Index map of the degeneracy collapsing ``i`` and ``i+1``."""
    return s if s <= i else s - 1


# ----------------------------------------------------------------- counts

@dataclass(frozen=True)
class Counts:
    vertices: int
    edges: int
    simplex_facets: int
    rectified_facets: int


def counts(n: int) -> Counts:
    if n < 1:
        raise ValueError("counts needs n >= 1")
    return Counts(comb(n + 1, 2), comb(n + 1, 2) * (n - 1), n + 1, n + 1)


def enumerated_counts(n: int) -> Counts:
    """Same numbers, obtained by walking the shape and its face embeddings."""
    shape = build_rectified_shape(n)
    if n < 2:
        return Counts(len(shape.vertices), len(shape.edges), n + 1, n + 1)
    simplex = {frozenset(face_simplex(shape, i).vertices) for i in range(n + 1)}
    rect = {frozenset(face_rectified(shape, i).vertices) for i in range(n + 1)}
    return Counts(len(shape.vertices), len(shape.edges), len(simplex), len(rect))


def face_lattice(n: int) -> dict[int, int]:
    """Number of ``d``-dimensional faces of the rectified ``n``-simplex.

    The rectified simplex is the polytope ``{x in [0,1]^{n+1} : sum x = 2}``;
    its faces are the nonempty sets cut out by fixing some coordinates to 0
    and some to 1.  Dimension is the affine rank of the vertex set.
    """
    N = n + 1
    verts = [tuple(1 if t in pair else 0 for t in range(N)) for pair in combinations(range(N), 2)]
    seen: set[frozenset] = set()
    tally: dict[int, int] = {}
    for assign in np.ndindex(*(3,) * N):  # 0: fixed 0, 1: fixed 1, 2: free
        face = frozenset(v for v in verts
                         if all(a == 2 or v[t] == a for t, a in enumerate(assign)))
        if not face or face in seen:
            continue
        seen.add(face)
        pts = np.array(sorted(face), dtype=float)
        d = int(np.linalg.matrix_rank(pts[1:] - pts[0])) if len(pts) > 1 else 0
        tally[d] = tally.get(d, 0) + 1
    return dict(sorted(tally.items()))


def item3_formula(n: int, i: int) -> int:
    """The closed form ``C(n+1, i+1)(n+1-i)`` for the number of ``i``-faces."""
    return comb(n + 1, i + 1) * (n + 1 - i)


def item3_report(n: int) -> list[tuple[int, int, int]]:
    """``(i, formula, enumerated)`` for every face dimension ``i < n``."""
    lat = face_lattice(n)
    return [(i, item3_formula(n, i), lat.get(i, 0)) for i in range(n)]


# ---------------------------------------------------------- canonical cycle

@dataclass(frozen=True)
class CycleStep:
    source: Vertex
    target: Vertex
    shift: int
    face: int            # the simplex face F_face containing the step
    path: tuple[Edge, ...]


def canonical_cycle(n: int) -> list[CycleStep]:
    """``a_{0,1} -> a_{0,n} -> a_{n-1,n} ~> ... ~> a_{1,2} ~> a_{0,1}``."""
    if n < 2:
        raise ValueError("canonical cycle needs n >= 2")
    steps = [CycleStep((0, 1), (0, n), 0, 0, tuple((0, j, j + 1) for j in range(1, n))),
             CycleStep((0, n), (n - 1, n), 0, n, ((n, 0, n - 1),))]
    for k in range(n - 1, 0, -1):
        steps.append(CycleStep((k, k + 1), (k - 1, k), 1, k, ((k, k - 1, k + 1),)))
    return steps


# ----------------------------------------------------------- Balmer layout

@dataclass(frozen=True)
class BalmerLayout:
    n: int
    cells: dict      # vertex -> (row, col)
    repeats: dict    # vertex a_{0,j} -> (row, col) of its shifted copy

    def segments(self) -> list[tuple[str, Vertex, Vertex, Edge]]:
        """Primitive horizontal, vertical and wrap segments with their edges."""
        n = self.n
        out = []
        for (i, j) in self.cells:
            if j < n:
                out.append(("h", (i, j), (i, j + 1), (i, j, j + 1)))
            if i + 1 < j:
                out.append(("v", (i, j), (i + 1, j), (j, i, i + 1)))
        for i in range(1, n):
            out.append(("wrap", (i, n), (0, i), (i, 0, n)))
        return out


def balmer_layout(n: int) -> BalmerLayout:
    if n < 1:
        raise ValueError("layout needs n >= 1")
    cells = {(i, j): (i, j) for i, j in combinations(range(n + 1), 2)}
    repeats = {} if n < 2 else {(0, j): (j, n + 1) for j in range(1, n + 1)}
    return BalmerLayout(n, cells, repeats)


def layout_path(n: int, e: Edge) -> list[Edge]:
    """Express ``e`` as a path of Balmer segments (a composite of generators)."""
    i, j, k = e
    if not is_wavy(e):
        # a run of horizontal (i < j) or vertical (k < i) segments
        return [(i, t, t + 1) for t in range(j, k)]
    # a_{i,k} -> a_{i,n} ~> a_{0,i}[1] -> a_{j,i}[1]
    path = [(i, t, t + 1) for t in range(k, n)]
    path.append((i, 0, n))
    path += [(i, t, t + 1) for t in range(0, j)]
    return path
