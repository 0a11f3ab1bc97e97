"""R_n-shaped diagrams of complexes and maps between them.

A wavy edge ``a_{x,y} ~> a_{z,w}`` is stored as an ordinary chain map
``a_{x,y} -> a_{z,w}[1]``.  Composites along a path are formed by shifting
later edges by the accumulated shift, so every path from a vertex ``v`` to
``w`` with total shift ``s`` yields a chain map ``v -> w[s]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Mapping

from fulltri.exact_linalg import PrimeField
from fulltri.homotopy_model.complexes import (
    ChainComplex, ChainMap, Homotopy, add, compose, direct_sum, identity, negate, shift,
    witnesses_homotopy, zero_complex, zero_map,
)
from fulltri.homotopy_model.equivalence import find_homotopy
from fulltri.simplex_geometry import (
    DirectedSimplexShape, Edge, RectifiedShape, Vertex, build_rectified_shape, edge_ends,
    face_rectified, face_simplex,
)

STRICT = "strict"
HOMOTOPY = "homotopy"
FAILS = "fails"


class DiagramError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class NTriangle:
    n: int
    objects: Mapping[Vertex, ChainComplex]
    edgemaps: Mapping[Edge, ChainMap]

    def __post_init__(self):
        shape = build_rectified_shape(self.n)
        if set(self.objects) != set(shape.vertices):
            raise DiagramError(f"objects must be indexed by the vertices of R_{self.n}")
        if set(self.edgemaps) != set(shape.edges):
            missing = sorted(set(shape.edges) - set(self.edgemaps))
            extra = sorted(set(self.edgemaps) - set(shape.edges))
            raise DiagramError(f"edge bookkeeping mismatch: missing {missing}, unexpected {extra}")
        for e, M in self.edgemaps.items():
            s, t, sh = edge_ends(e)
            if M.source != self.objects[s]:
                raise DiagramError(f"edge {e}: source is not a_{s}")
            want = shift(self.objects[t], sh) if sh else self.objects[t]
            if M.target != want:
                raise DiagramError(f"edge {e}: target is not a_{t}{'[1]' if sh else ''}")
        object.__setattr__(self, "objects", dict(self.objects))
        object.__setattr__(self, "edgemaps", dict(self.edgemaps))

    @property
    def shape(self) -> RectifiedShape:
        return build_rectified_shape(self.n)

    @property
    def field(self) -> PrimeField:
        return next(iter(self.objects.values())).field

    def obj(self, i: int, j: int) -> ChainComplex:
        return self.objects[(i, j)]

    def edge(self, i: int, j: int, k: int) -> ChainMap:
        return self.edgemaps[(i, j, k)]

    def base(self) -> list[ChainMap]:
        """The composable maps ``a_{0,1} -> a_{0,2} -> ... -> a_{0,n}``."""
        return [self.edgemaps[(0, j, j + 1)] for j in range(1, self.n)]

    def __eq__(self, other):
        if not isinstance(other, NTriangle):
            return NotImplemented
        return (self.n == other.n
                and all(self.objects[v] == other.objects[v] for v in self.objects)
                and all(self.edgemaps[e] == other.edgemaps[e] for e in self.edgemaps))

    __hash__ = None

    def __repr__(self):
        return f"NTriangle(n={self.n})"


def triangle_2(u: ChainMap, v: ChainMap, w: ChainMap) -> NTriangle:
    """The 2-triangle ``a -u-> b -v-> c -w-> a[1]``."""
    return NTriangle(2, {(0, 1): u.source, (0, 2): u.target, (1, 2): v.target},
                     {(0, 1, 2): u, (2, 0, 1): v, (1, 0, 2): w})


def uvw(T: NTriangle) -> tuple[ChainMap, ChainMap, ChainMap]:
    if T.n != 2:
        raise DiagramError("uvw() needs a 2-triangle")
    return T.edgemaps[(0, 1, 2)], T.edgemaps[(2, 0, 1)], T.edgemaps[(1, 0, 2)]


def path_composite(T: NTriangle, path: list[Edge]) -> tuple[ChainMap, int]:
    """Composite along ``path`` and its total shift."""
    total = None
    acc = 0
    for e in path:
        M = T.edgemaps[e]
        M = shift(M, acc) if acc else M
        total = M if total is None else compose(M, total)
        acc += edge_ends(e)[2]
    return total, acc


# --------------------------------------------------------------- verification

@dataclass
class CheckEntry:
    kind: str                    # "triangle" or "square"
    start: Vertex
    end: Vertex
    shift: int
    paths: tuple                 # (reference path, compared path)
    status: str
    witness: Homotopy | None = None


@dataclass
class VerificationReport:
    mode: str
    entries: list[CheckEntry] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e.status != FAILS for e in self.entries)

    @property
    def strict(self) -> bool:
        return all(e.status == STRICT for e in self.entries)

    def failures(self) -> list[CheckEntry]:
        return [e for e in self.entries if e.status == FAILS]

    def recheck(self, composite_of) -> bool:
        """Re-multiply every homotopy witness; ``composite_of(path)`` rebuilds a composite."""
        for e in self.entries:
            if e.status == HOMOTOPY:
                f = composite_of(e.paths[0])
                g = composite_of(e.paths[1])
                if not witnesses_homotopy(e.witness, f, g):
                    return False
        return True

    def summary(self) -> str:
        n_strict = sum(e.status == STRICT for e in self.entries)
        n_htpy = sum(e.status == HOMOTOPY for e in self.entries)
        n_fail = len(self.entries) - n_strict - n_htpy
        verdict = "pass" if self.ok else "FAIL"
        return f"{verdict}: {len(self.entries)} checks, {n_strict} strict, {n_htpy} up to homotopy, {n_fail} failing"


def _compare(f: ChainMap, g: ChainMap, mode: str) -> tuple[str, Homotopy | None]:
    if f == g:
        return STRICT, None
    if mode == STRICT:
        return FAILS, None
    h = find_homotopy(f, g)
    return (HOMOTOPY, h) if h is not None else (FAILS, None)


def commuting_paths(n: int) -> list[tuple[str, Vertex, Vertex, int, list[list[Edge]]]]:
    """Groups of paths of length 1 or 2 sharing endpoints and total shift."""
    shape = build_rectified_shape(n)
    out_edges: dict[Vertex, list[Edge]] = {v: [] for v in shape.vertices}
    for e in shape.edges:
        out_edges[edge_ends(e)[0]].append(e)
    groups = []
    for v in shape.vertices:
        bucket: dict[tuple[Vertex, int], list[list[Edge]]] = {}
        for e1 in out_edges[v]:
            _, t1, s1 = edge_ends(e1)
            bucket.setdefault((t1, s1), []).append([e1])
            for e2 in out_edges[t1]:
                _, t2, s2 = edge_ends(e2)
                if t2 != v:
                    bucket.setdefault((t2, s1 + s2), []).append([e1, e2])
        for (t, s), paths in sorted(bucket.items()):
            if len(paths) > 1:
                kind = "triangle" if any(len(p) == 1 for p in paths) else "square"
                groups.append((kind, v, t, s, paths))
    return groups


def verify_diagram(T: NTriangle, mode: str = HOMOTOPY) -> VerificationReport:
    """Check every simplex-face triangle and every square of ``T``."""
    if mode not in (STRICT, HOMOTOPY):
        raise ValueError(f"unknown mode {mode!r}")
    report = VerificationReport(mode)
    for kind, v, t, s, paths in commuting_paths(T.n):
        ref, _ = path_composite(T, paths[0])
        for p in paths[1:]:
            other, _ = path_composite(T, p)
            status, wit = _compare(ref, other, mode)
            report.entries.append(CheckEntry(kind, v, t, s, (tuple(paths[0]), tuple(p)), status, wit))
    return report


# ------------------------------------------------------------------ maps

@dataclass(frozen=True, eq=False)
class TriangleMap:
    source: NTriangle
    target: NTriangle
    comps: Mapping[Vertex, ChainMap]

    def __post_init__(self):
        if self.source.n != self.target.n:
            raise DiagramError("maps need triangles of equal dimension")
        for v in self.source.objects:
            f = self.comps.get(v)
            if f is None:
                raise DiagramError(f"missing component at {v}")
            if f.source != self.source.objects[v] or f.target != self.target.objects[v]:
                raise DiagramError(f"component at {v} has the wrong source/target")
        object.__setattr__(self, "comps", dict(self.comps))

    @property
    def n(self) -> int:
        return self.source.n

    def __getitem__(self, v: Vertex) -> ChainMap:
        return self.comps[v]

    def __eq__(self, other):
        if not isinstance(other, TriangleMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and all(self.comps[v] == other.comps[v] for v in self.comps))

    __hash__ = None


def map_2(S: NTriangle, T: NTriangle, f: ChainMap, g: ChainMap, h: ChainMap) -> TriangleMap:
    return TriangleMap(S, T, {(0, 1): f, (0, 2): g, (1, 2): h})


def fgh(G: TriangleMap) -> tuple[ChainMap, ChainMap, ChainMap]:
    return G.comps[(0, 1)], G.comps[(0, 2)], G.comps[(1, 2)]


def identity_map(T: NTriangle) -> TriangleMap:
    return TriangleMap(T, T, {v: identity(C) for v, C in T.objects.items()})


def compose_maps(H: TriangleMap, G: TriangleMap) -> TriangleMap:
    """``H`` after ``G``."""
    return TriangleMap(G.source, H.target, {v: compose(H.comps[v], G.comps[v]) for v in G.comps})


@dataclass
class NaturalityEntry:
    edge: Edge
    status: str
    witness: Homotopy | None = None


@dataclass
class MapReport:
    mode: str
    entries: list[NaturalityEntry] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e.status != FAILS for e in self.entries)


def naturality_square(G: TriangleMap, e: Edge) -> tuple[ChainMap, ChainMap]:
    """``(target edge . G[src], G[tgt][sh] . source edge)`` for the edge ``e``."""
    s, t, sh = edge_ends(e)
    lhs = compose(G.target.edgemaps[e], G.comps[s])
    gt = shift(G.comps[t], sh) if sh else G.comps[t]
    rhs = compose(gt, G.source.edgemaps[e])
    return lhs, rhs


def verify_map(G: TriangleMap, mode: str = HOMOTOPY) -> MapReport:
    rep = MapReport(mode)
    for e in G.source.shape.edges:
        lhs, rhs = naturality_square(G, e)
        status, wit = _compare(lhs, rhs, mode)
        rep.entries.append(NaturalityEntry(e, status, wit))
    return rep


# --------------------------------------------------------------- rotations

def _rot(x: int, n: int, k: int = 1) -> int:
    return (x + k) % (n + 1)


def _rot_vertex(v: Vertex, n: int, k: int = 1) -> Vertex:
    a, b = _rot(v[0], n, k), _rot(v[1], n, k)
    return (min(a, b), max(a, b))


def _rot_edge(e: Edge, n: int, k: int = 1) -> Edge:
    i, j, k2 = (_rot(x, n, k) for x in e)
    return (i, min(j, k2), max(j, k2))


def _tau_shifted(old: Vertex, n: int) -> int:
    """Old vertices not on the last face pick up a [1] under the rotation."""
    return 0 if old[1] == n else 1


def _tau_sign(e: Edge, n: int) -> bool:
    """Whether the rotated edge ``e`` (new labels) is negated."""

    def s(v: Vertex) -> int:
        i, j = v
        if i != 0:
            return 0
        if n % 2 == 0:
            return int(j % 2 == 0 and 2 * j <= n)
        m = (n + 1) // 2
        return int(j < m and (j + m) % 2 == 1)

    src, tgt, sh = edge_ends(e)
    return bool(sh ^ s(src) ^ s(tgt))


def _sigma_sign(e: Edge, n: int) -> bool:
    def t(v: Vertex) -> int:
        return int(n % 2 == 0 and 2 * (v[1] - v[0]) > n)

    src, tgt, sh = edge_ends(e)
    return bool(sh ^ t(src) ^ t(tgt))


def rotate_tau(T: NTriangle) -> NTriangle:
    """Rotation: the new base is the old last simplex face ``F_n``.

    New ``a_{0,y}`` is old ``a_{y-1,n}``; new ``a_{x,y}`` (``x >= 1``) is old
    ``a_{x-1,y-1}[1]``.
    """
    n = T.n
    objects = {}
    for v, C in T.objects.items():
        p = _tau_shifted(v, n)
        objects[_rot_vertex(v, n)] = shift(C, p) if p else C
    edgemaps = {}
    for e, M in T.edgemaps.items():
        ne = _rot_edge(e, n)
        os_, ot, osh = edge_ends(e)
        ns, nt, nsh = edge_ends(ne)
        assert ns == _rot_vertex(os_, n) and nt == _rot_vertex(ot, n)
        p, q = _tau_shifted(os_, n), _tau_shifted(ot, n)
        assert q + nsh == p + osh, "shift bookkeeping"
        M2 = shift(M, p) if p else M
        edgemaps[ne] = negate(M2) if _tau_sign(ne, n) else M2
    return NTriangle(n, objects, edgemaps)


def rotate_tau_inverse(T: NTriangle) -> NTriangle:
    n = T.n
    objects = {}
    for v, C in T.objects.items():
        old = _rot_vertex(v, n, -1)
        p = _tau_shifted(old, n)
        objects[old] = shift(C, -p) if p else C
    edgemaps = {}
    for ne, M in T.edgemaps.items():
        e = _rot_edge(ne, n, -1)
        p = _tau_shifted(edge_ends(e)[0], n)
        M2 = shift(M, -p) if p else M
        edgemaps[e] = negate(M2) if _tau_sign(ne, n) else M2
    return NTriangle(n, objects, edgemaps)


def rotate_sigma(T: NTriangle, k: int = 1) -> NTriangle:
    """Full rotation applied ``k`` times (``k`` may be negative)."""
    for _ in range(abs(k)):
        step = 1 if k > 0 else -1
        n = T.n
        objects = {v: shift(C, step) for v, C in T.objects.items()}
        edgemaps = {}
        for e, M in T.edgemaps.items():
            M2 = shift(M, step)
            edgemaps[e] = negate(M2) if _sigma_sign(e, n) else M2
        T = NTriangle(n, objects, edgemaps)
    return T


def rotate_tau_power(T: NTriangle, k: int) -> NTriangle:
    for _ in range(abs(k)):
        T = rotate_tau(T) if k > 0 else rotate_tau_inverse(T)
    return T


def shift_triangle(T: NTriangle, k: int) -> NTriangle:
    """``T[k]``: every object and every edge map shifted, no signs."""
    return NTriangle(T.n, {v: shift(C, k) for v, C in T.objects.items()},
                     {e: shift(M, k) for e, M in T.edgemaps.items()})


def rotate_map_tau(G: TriangleMap) -> TriangleMap:
    """Rotation is a functor: components are relabelled and shifted."""
    n = G.n
    S, T = rotate_tau(G.source), rotate_tau(G.target)
    comps = {}
    for v, f in G.comps.items():
        p = _tau_shifted(v, n)
        comps[_rot_vertex(v, n)] = shift(f, p) if p else f
    return TriangleMap(S, T, comps)


@lru_cache(maxsize=None)
def face_wrap_signs(n: int) -> dict:
    """Vertex signs for the map ``F_0 -> sigma tau^{-1} F_n`` of an n-triangle.

    Its target differs from ``F_0`` edge by edge by the signs the two
    rotations introduce; the components absorb them as a sign potential
    ``eps(s) eps(t) = sign(e)``, normalised by ``eps(0, 1) = 1``.
    """
    m = n - 1
    shape = build_rectified_shape(m)
    flip = {e: _tau_sign(_rot_edge(e, m), m) ^ _sigma_sign(e, m) for e in shape.edges}
    eps = {(0, 1): 1}
    todo = [(0, 1)]
    while todo:
        a = todo.pop()
        for e in shape.edges:
            s, t, _ = edge_ends(e)
            if a not in (s, t):
                continue
            b = t if a == s else s
            want = -eps[a] if flip[e] else eps[a]
            if b not in eps:
                eps[b] = want
                todo.append(b)
            elif eps[b] != want:  # pragma: no cover - sign rules are consistent
                raise AssertionError("rotation signs admit no potential")
    return eps


# ------------------------------------------------------------------ faces

@dataclass(frozen=True, eq=False)
class SimplexDiagram:
    """A ``Delta_{n-1}^i``-shaped diagram cut out of an n-triangle."""

    shape: DirectedSimplexShape
    objects: Mapping[int, ChainComplex]
    maps: Mapping[tuple[int, int], ChainMap]
    vertices: Mapping[int, Vertex]


def face_sigma(T: NTriangle, i: int) -> SimplexDiagram:
    emb = face_simplex(T.shape, i)
    objects = {s: T.objects[v] for s, v in emb.vertex_map.items()}
    maps = {ab: T.edgemaps[e] for ab, e in emb.edge_map.items()}
    return SimplexDiagram(emb.shape, objects, maps, dict(emb.vertex_map))


def face_pi(T: NTriangle, i: int) -> NTriangle:
    emb = face_rectified(T.shape, i)
    return NTriangle(T.n - 1, {v: T.objects[w] for v, w in emb.vertex_map.items()},
                     {e: T.edgemaps[f] for e, f in emb.edge_map.items()})


def face_pi_map(G: TriangleMap, i: int) -> TriangleMap:
    emb = face_rectified(G.source.shape, i)
    return TriangleMap(face_pi(G.source, i), face_pi(G.target, i),
                       {v: G.comps[w] for v, w in emb.vertex_map.items()})


def face_2(T: NTriangle, x: int, y: int, z: int) -> NTriangle:
    """The 2-face ``a_{x,y} -> a_{x,z} -> a_{y,z} ~> a_{x,y}`` of ``T``."""
    return triangle_2(T.edgemaps[(x, y, z)], T.edgemaps[(z, x, y)], T.edgemaps[(y, x, z)])


def face_2_map(G: TriangleMap, x: int, y: int, z: int) -> TriangleMap:
    return map_2(face_2(G.source, x, y, z), face_2(G.target, x, y, z),
                 G.comps[(x, y)], G.comps[(x, z)], G.comps[(y, z)])


# ------------------------------------------------------------- degeneracy

def degenerate(T: NTriangle, i: int) -> NTriangle:
    """Duplicate index ``i``: an (n+1)-triangle whose indices ``i`` and ``i+1``
    both stand for the old ``i``.  The vertex ``a_{i,i+1}`` is zero, edges
    between copies are identities, edges touching the zero vertex are zero."""
    n = T.n
    if not 0 <= i <= n:
        raise IndexError(f"degeneracy index {i} out of range for a {n}-triangle")
    fld = T.field
    Z = zero_complex(fld)

    def d(s: int) -> int:
        return s if s <= i else s - 1

    shape = build_rectified_shape(n + 1)
    objects = {}
    for x, y in shape.vertices:
        objects[(x, y)] = Z if (x, y) == (i, i + 1) else T.objects[(d(x), d(y))]
    edgemaps = {}
    for e in shape.edges:
        s, t, sh = edge_ends(e)
        src = objects[s]
        tgt = shift(objects[t], sh) if sh else objects[t]
        a, b, c = e
        if (i, i + 1) in (s, t):
            edgemaps[e] = zero_map(src, tgt)
        elif {b, c} == {i, i + 1}:
            edgemaps[e] = identity(src)
        else:
            edgemaps[e] = T.edgemaps[(d(a), d(b), d(c))]
    return NTriangle(n + 1, objects, edgemaps)


# ------------------------------------------------------------ direct sums

def direct_sum_triangles(T1: NTriangle, T2: NTriangle) -> NTriangle:
    if T1.n != T2.n:
        raise DiagramError("direct sum needs triangles of equal dimension")
    return NTriangle(T1.n, {v: direct_sum(T1.objects[v], T2.objects[v]) for v in T1.objects},
                     {e: direct_sum(T1.edgemaps[e], T2.edgemaps[e]) for e in T1.edgemaps})


def direct_sum_maps(G1: TriangleMap, G2: TriangleMap) -> TriangleMap:
    if G1.n != G2.n:
        raise DiagramError("direct sum needs maps of equal dimension")
    return TriangleMap(direct_sum_triangles(G1.source, G2.source),
                       direct_sum_triangles(G1.target, G2.target),
                       {v: direct_sum(G1.comps[v], G2.comps[v]) for v in G1.comps})


def add_maps(G1: TriangleMap, G2: TriangleMap) -> TriangleMap:
    if G1.source != G2.source or G1.target != G2.target:
        raise DiagramError("sum of maps needs equal endpoints")
    return TriangleMap(G1.source, G1.target, {v: add(G1.comps[v], G2.comps[v]) for v in G1.comps})


def zero_triangle(n: int, fld: PrimeField) -> NTriangle:
    Z = zero_complex(fld)
    shape = build_rectified_shape(n)
    return NTriangle(n, {v: Z for v in shape.vertices}, {e: zero_map(Z, Z) for e in shape.edges})


def from_balmer(n: int, objects: Mapping[Vertex, ChainComplex],
                generators: Mapping[Edge, ChainMap]) -> NTriangle:
    """Fill in all edges from the Balmer generators (horizontal, vertical and
    wrap segments) by composition."""
    from fulltri.simplex_geometry import layout_path
    edgemaps = dict(generators)
    stub = {e: generators[e] for e in generators}
    for e in build_rectified_shape(n).edges:
        if e in edgemaps:
            continue
        total = None
        acc = 0
        for g in layout_path(n, e):
            M = stub[g]
            M = shift(M, acc) if acc else M
            total = M if total is None else compose(M, total)
            acc += edge_ends(g)[2]
        edgemaps[e] = total
    return NTriangle(n, objects, edgemaps)


def all_two_faces(n: int) -> list[tuple[int, int, int]]:
    return list(combinations(range(n + 1), 3))
