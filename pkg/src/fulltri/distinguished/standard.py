"""Standard n-triangles built from mapping cones of a composable chain of maps."""

from __future__ import annotations

from fulltri.homotopy_model.complexes import (
    ChainMap, ComplexError, Homotopy, compose, cone_parts, graded_block, identity,
    mapping_cone, shift, shift_parts,
)
from fulltri.ntriangle import NTriangle, verify_diagram
from fulltri.simplex_geometry import build_rectified_shape, edge_ends
from fulltri.verdict import STANDARD, Certificate


def composites(base: list[ChainMap]) -> dict[tuple[int, int], ChainMap]:
    """``u[(i, j)] : b_i -> b_j`` for ``1 <= i <= j <= n`` (1-based, as on the base)."""
    for a, b in zip(base, base[1:]):
        if a.target != b.source:
            raise ComplexError("base maps are not composable")
    n = len(base) + 1
    objs = [base[0].source] + [u.target for u in base]
    u = {}
    for i in range(1, n + 1):
        u[(i, i)] = identity(objs[i - 1])
        for j in range(i + 1, n + 1):
            u[(i, j)] = compose(base[j - 2], u[(i, j - 1)])
    return u


def cone_map(u: ChainMap, u2: ChainMap, f: ChainMap, g: ChainMap,
             k: Homotopy | None = None, check: bool = True) -> ChainMap:
    """``[[f[1], 0], [k, g]] : C(u) -> C(u2)`` (``k`` a homotopy ``X -> Y2``)."""
    C1, C2 = mapping_cone(u).complex, mapping_cone(u2).complex
    return graded_block(C1, C2, cone_parts(u), cone_parts(u2), [[f, 0], [k or 0, g]], check=check)


def build_standard(base: list[ChainMap], check: bool = True) -> tuple[NTriangle, Certificate]:
    """The standard n-triangle on ``b_1 -> ... -> b_n`` (``n = len(base) + 1``).

    ``a_{0,j} = b_j`` and ``a_{i,j} = C(b_i -> b_j)``.  Edge maps are
    ``diag(1, u)`` along rows, ``diag(u[1], 1)`` (or the cone inclusion) down
    columns, and on wavy edges the projection onto ``b_i[1]`` followed by the
    inclusion into ``C(b_j -> b_i)[1]`` (or just the projection when ``j = 0``).
    The result commutes on the nose.
    """
    if not base:
        raise ComplexError("a base needs at least one map")
    n = len(base) + 1
    u = composites(base)
    b = {j: (base[0].source if j == 1 else base[j - 2].target) for j in range(1, n + 1)}
    cones = {(i, j): mapping_cone(u[(i, j)]) for i in range(1, n + 1) for j in range(i + 1, n + 1)}
    objects = {}
    for i, j in build_rectified_shape(n).vertices:
        objects[(i, j)] = b[j] if i == 0 else cones[(i, j)].complex

    def parts(i, j):
        return cone_parts(u[(i, j)])

    edgemaps = {}
    for e in build_rectified_shape(n).edges:
        i, j, k = e
        src, tgt, sh = edge_ends(e)
        S, T = objects[src], objects[tgt]
        if i < j:
            # a_{i,j} -> a_{i,k}
            if i == 0:
                M = u[(j, k)]
            else:
                M = graded_block(S, T, parts(i, j), parts(i, k), [[1, 0], [0, u[(j, k)]]], check=False)
        elif k < i:
            # a_{j,i} -> a_{k,i}
            if j == 0:
                M = cones[(k, i)].inclusion
            else:
                M = graded_block(S, T, parts(j, i), parts(k, i), [[u[(j, k)], 0], [0, 1]], check=False)
        else:
            # a_{i,k} ~> a_{j,i}[1]
            if j == 0:
                M = cones[(i, k)].projection
            else:
                T1 = shift(T, 1)
                M = graded_block(S, T1, parts(i, k), shift_parts(parts(j, i), 1), [[0, 0], [1, 0]],
                                 check=False)
        edgemaps[e] = M
    T = NTriangle(n, objects, edgemaps)
    if check:
        rep = verify_diagram(T, mode="strict")
        assert rep.ok, f"standard triangle does not commute: {rep.summary()}"
    return T, Certificate(STANDARD, standard=T)


def build_standard_2(u: ChainMap) -> tuple[NTriangle, Certificate]:
    return build_standard([u], check=False)
