"""Good maps (distinguished mapping cones) and the three Neeman maps."""

from __future__ import annotations

from fulltri.homotopy_model.complexes import block_map, compose, identity, negate, shift
from fulltri.homotopy_model.linsys import Expr, LinearSystem
from fulltri.ntriangle import (
    DiagramError, NTriangle, TriangleMap, fgh, map_2, path_composite, triangle_2, uvw,
    verify_diagram,
)
from fulltri.verdict import Verdict, no
from fulltri.distinguished.decide import DEFAULT_BUDGET, check_distinguished_2


def _need_2(G: TriangleMap):
    if G.n != 2:
        raise DiagramError("expected a map of 2-triangles")


def mapping_cone_of_map(G: TriangleMap) -> NTriangle:
    """``a'+b -> b'+c -> c'+a[1] -> (a'+b)[1]`` with the usual twisted blocks."""
    _need_2(G)
    u, v, w = uvw(G.source)
    u2, v2, w2 = uvw(G.target)
    f, g, h = fgh(G)
    a, b, c = u.source, v.source, w.source
    a2, b2, c2 = u2.source, v2.source, w2.source
    a1 = shift(a, 1)
    m1 = block_map([b2, c], [a2, b], [[u2, g], [0, negate(v)]])
    m2 = block_map([c2, a1], [b2, c], [[v2, h], [0, negate(w)]])
    m3 = block_map([shift(a2, 1), shift(b, 1)], [c2, a1], [[w2, shift(f, 1)], [0, negate(shift(u, 1))]])
    return triangle_2(m1, m2, m3)


def _obstruction_fingerprint(T: NTriangle) -> str | None:
    """Fingerprint of the unsolvable homotopy system behind a failing square."""
    rep = verify_diagram(T)
    for entry in rep.failures():
        f, _ = path_composite(T, list(entry.paths[0]))
        g, _ = path_composite(T, list(entry.paths[1]))
        sys = LinearSystem(T.field)
        sys.homotopic(Expr.of(f), Expr.of(g))
        return sys.fingerprint()
    return None


def is_good(G: TriangleMap, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Whether the mapping cone triangle of ``G`` is distinguished."""
    C = mapping_cone_of_map(G)
    if not verify_diagram(C).ok:
        return no("mapping cone diagram does not commute up to homotopy",
                  fingerprint=_obstruction_fingerprint(C))
    return check_distinguished_2(C, budget)


# ------------------------------------------------------------ Neeman maps

def _neeman_source(G: TriangleMap) -> NTriangle:
    """``a'+a -> a'+b+b' -> b'+c -> (a'+a)[1]``."""
    u, v, w = uvw(G.source)
    u2, v2, _ = uvw(G.target)
    a, b, c = u.source, v.source, w.source
    a2, b2 = u2.source, v2.source
    m1 = block_map([a2, b, b2], [a2, a], [[1, 0], [0, u], [0, 0]])
    m2 = block_map([b2, c], [a2, b, b2], [[0, 0, 1], [0, v, 0]])
    m3 = block_map([shift(a2, 1), shift(a, 1)], [b2, c], [[0, 0], [0, w]])
    return triangle_2(m1, m2, m3)


def neeman_N(G: TriangleMap) -> TriangleMap:
    """Neeman's map: first component the identity of ``a'+a``."""
    _need_2(G)
    u, v, w = uvw(G.source)
    u2, v2, w2 = uvw(G.target)
    f, g, h = fgh(G)
    a, b, c = u.source, v.source, w.source
    a2, b2, c2 = u2.source, v2.source, w2.source
    a1 = shift(a, 1)
    S = _neeman_source(G)
    t1 = block_map([b2], [a2, a], [[u2, compose(g, u)]])
    t2 = block_map([c2, a1], [b2], [[v2], [0]])
    t3 = block_map([shift(a2, 1), a1], [c2, a1], [[w2, shift(f, 1)], [0, -1]])
    T = triangle_2(t1, t2, t3)
    return map_2(S, T, block_map([a2, a], [a2, a], [[1, 0], [0, 1]]),
                 block_map([b2], [a2, b, b2], [[u2, g, 1]]),
                 block_map([c2, a1], [b2, c], [[v2, h], [0, negate(w)]]))


def neeman_Nprime(G: TriangleMap) -> TriangleMap:
    """``N(G)`` conjugated by ``((1, f), (0, -1))`` on the first vertex."""
    _need_2(G)
    u, v, w = uvw(G.source)
    u2, v2, w2 = uvw(G.target)
    f, g, h = fgh(G)
    a, b, c = u.source, v.source, w.source
    a2, b2, c2 = u2.source, v2.source, w2.source
    a1 = shift(a, 1)
    S = _neeman_source(G)
    t1 = block_map([b2], [a2, a], [[u2, 0]])
    t2 = block_map([c2, a1], [b2], [[v2], [0]])
    t3 = block_map([shift(a2, 1), a1], [c2, a1], [[w2, 0], [0, 1]])
    T = triangle_2(t1, t2, t3)
    return map_2(S, T, block_map([a2, a], [a2, a], [[1, f], [0, -1]]),
                 block_map([b2], [a2, b, b2], [[u2, g, 1]]),
                 block_map([c2, a1], [b2, c], [[v2, h], [0, negate(w)]]))


def neeman_Ndoubleprime(G: TriangleMap) -> TriangleMap:
    """The variant landing on the original target triangle."""
    _need_2(G)
    u, v, w = uvw(G.source)
    u2, v2, _ = uvw(G.target)
    f, g, h = fgh(G)
    a, b, c = u.source, v.source, w.source
    a2, b2 = u2.source, v2.source
    S = _neeman_source(G)
    return map_2(S, G.target, block_map([a2], [a2, a], [[1, f]]),
                 block_map([b2], [a2, b, b2], [[u2, g, 1]]),
                 block_map([v2.target], [b2, c], [[v2, h]]))


def neeman_Nprime_iso(G: TriangleMap) -> TriangleMap:
    """The isomorphism ``(((1, f), (0, -1)), 1, 1)`` from the target of ``N'(G)`` to that of ``N(G)``."""
    N, Np = neeman_N(G), neeman_Nprime(G)
    u2 = uvw(G.target)[0]
    f = fgh(G)[0]
    a2, a = u2.source, f.source
    P = block_map([a2, a], [a2, a], [[1, f], [0, -1]])
    return TriangleMap(Np.target, N.target,
                       {(0, 1): P, (0, 2): identity(N.target.obj(0, 2)),
                        (1, 2): identity(N.target.obj(1, 2))})
