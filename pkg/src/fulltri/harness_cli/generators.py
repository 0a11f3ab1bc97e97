"""Seeded random complexes, chain maps and ready-made test instances.

Every function takes either an integer seed or a ``numpy`` generator, so a
whole instance can be rebuilt from one seed.
"""

from __future__ import annotations

import numpy as np

from fulltri.exact_linalg import GF2, PrimeField
from fulltri.homotopy_model.complexes import (
    ChainComplex, ChainMap, Homotopy, add, compose, scale, shift,
)
from fulltri.homotopy_model.linsys import Expr, LinearSystem
from fulltri.ntriangle import NTriangle, TriangleMap, map_2
from fulltri.distinguished.decide import apply_lightning
from fulltri.distinguished.standard import build_standard, cone_map

DEFAULT_MAX_DIM = 3
DEFAULT_SPAN = (-3, 3)


def as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _unit_upper(rng, k: int, p: int) -> tuple[np.ndarray, np.ndarray]:
    """A random unit upper-triangular matrix and its inverse mod ``p``."""
    U = np.triu(rng.integers(0, p, size=(k, k)), 1) + np.eye(k, dtype=np.int64)
    inv = np.eye(k, dtype=np.int64)
    # back substitution, column by column
    for j in range(k):
        for i in range(j - 1, -1, -1):
            inv[i, j] = -int(U[i, i + 1:j + 1] @ inv[i + 1:j + 1, j]) % p
    return U % p, inv % p


def random_complex(seed, max_dim: int = DEFAULT_MAX_DIM, degree_span=DEFAULT_SPAN,
                   field: PrimeField = GF2) -> ChainComplex:
    """A complex with at most ``max_dim`` generators per degree.

    Built in a split basis ``C^n = B^n + H^n + E^n`` with ``d: E^n -> B^{n+1}``
    the identity, then conjugated degreewise by random unit upper-triangular
    matrices, so ``d d = 0`` holds by construction.
    """
    rng = as_rng(seed)
    lo, hi = degree_span
    p = field.p
    if max_dim <= 0 or hi < lo:
        return ChainComplex(field, {})
    ranks = {lo - 1: 0}
    homology = {}
    for n in range(lo, hi + 1):
        room = max_dim - ranks[n - 1]
        r = int(rng.integers(0, room + 1)) if n < hi else 0
        homology[n] = int(rng.integers(0, room - r + 1))
        ranks[n] = r
    dims = {n: ranks[n - 1] + homology[n] + ranks[n] for n in range(lo, hi + 1)}
    conj = {n: _unit_upper(rng, dims[n], p) for n in dims}
    diffs = {}
    for n in range(lo, hi):
        r = ranks[n]
        if r == 0:
            continue
        D = np.zeros((dims[n + 1], dims[n]), dtype=np.int64)
        start = ranks[n - 1] + homology[n]
        D[:r, start:start + r] = np.eye(r, dtype=np.int64)
        U1, _ = conj[n + 1]
        _, V0 = conj[n]
        diffs[n] = field.matmul(field.matmul(U1, D), V0)
    return ChainComplex(field, dims, diffs)


def random_chain_map(seed, X: ChainComplex, Y: ChainComplex) -> ChainMap:
    """A uniformly random element of the space of chain maps ``X -> Y``."""
    rng = as_rng(seed)
    sys = LinearSystem(X.field)
    f = sys.chain_map(X, Y)
    sol = list(sys.samples(rng, 1))[-1]
    return sol[f]


def random_homotopy(seed, X: ChainComplex, Y: ChainComplex) -> Homotopy:
    rng = as_rng(seed)
    comps = {n: rng.integers(0, X.p, size=(Y.dim(n - 1), X.dim(n))) for n in X.degrees if Y.dim(n - 1)}
    return Homotopy(X, Y, comps)


# ------------------------------------------------------------- instances

def random_base(seed, n: int, field: PrimeField = GF2, max_dim: int = 2,
                degree_span=(-1, 1)) -> list[ChainMap]:
    """``n - 1`` composable random chain maps."""
    rng = as_rng(seed)
    objs = [random_complex(rng, max_dim, degree_span, field) for _ in range(n)]
    return [random_chain_map(rng, objs[i], objs[i + 1]) for i in range(n - 1)]


def random_base_map(seed, base: list[ChainMap], max_dim: int = 2, degree_span=(-1, 1)):
    """A random target base and components ``f_j`` with every square commuting up to homotopy."""
    rng = as_rng(seed)
    field = base[0].field
    objs = [random_complex(rng, max_dim, degree_span, field) for _ in range(len(base) + 1)]
    target = [random_chain_map(rng, objs[i], objs[i + 1]) for i in range(len(base))]
    sources = [base[0].source] + [u.target for u in base]
    sys = LinearSystem(field)
    fs = [sys.chain_map(X, Y, f"f{j}") for j, (X, Y) in enumerate(zip(sources, objs), 1)]
    for j, (u, u2) in enumerate(zip(base, target)):
        sys.homotopic(Expr.of(fs[j + 1]).after(u), Expr.of(fs[j]).then(u2))
    sol = list(sys.samples(rng, 1))[-1]
    return target, [sol[f] for f in fs]


def random_square(seed, field: PrimeField = GF2, max_dim: int = 2, degree_span=(-1, 1)):
    """``(u, u', f, g, k)`` with ``g u - u' f = d k + k d``, all solved jointly."""
    rng = as_rng(seed)
    a, b, a2, b2 = (random_complex(rng, max_dim, degree_span, field) for _ in range(4))
    u = random_chain_map(rng, a, b)
    u2 = random_chain_map(rng, a2, b2)
    sys = LinearSystem(field)
    fv = sys.chain_map(a, a2, "f")
    gv = sys.chain_map(b, b2, "g")
    k = sys.homotopic(Expr.of(gv).after(u), Expr.of(fv).then(u2))
    sol = list(sys.samples(rng, 1))[-1]
    return u, u2, sol[fv], sol[gv], sol[k]


def random_map_between(seed, S: NTriangle, T: NTriangle) -> TriangleMap:
    """A random distinguished map between two standard 2-triangles."""
    rng = as_rng(seed)
    u, u2 = S.edge(0, 1, 2), T.edge(0, 1, 2)
    sys = LinearSystem(S.field)
    fv = sys.chain_map(u.source, u2.source, "f")
    gv = sys.chain_map(u.target, u2.target, "g")
    k = sys.homotopic(Expr.of(gv).after(u), Expr.of(fv).then(u2))
    sol = list(sys.samples(rng, 1))[-1]
    f, g = sol[fv], sol[gv]
    G = map_2(S, T, f, g, cone_map(u, u2, f, g, sol[k]))
    tau = random_chain_map(rng, shift(u.source, 1), u2.target)
    return apply_lightning(G, tau)


def random_distinguished_map(seed, field: PrimeField = GF2, max_dim: int = 2,
                             degree_span=(-1, 1), lightning: bool = True) -> TriangleMap:
    """A homotopy-type map of standard triangles, optionally struck by lightning."""
    rng = as_rng(seed)
    u, u2, f, g, k = random_square(rng, field, max_dim, degree_span)
    S, T = build_standard([u])[0], build_standard([u2])[0]
    G = map_2(S, T, f, g, cone_map(u, u2, f, g, k))
    if lightning:
        tau = random_chain_map(rng, shift(u.source, 1), u2.target)
        G = apply_lightning(G, tau)
    return G


def perturb_third(seed, G: TriangleMap) -> TriangleMap:
    """``G`` with a random chain map added to its third component."""
    rng = as_rng(seed)
    f, g, h = G.comps[(0, 1)], G.comps[(0, 2)], G.comps[(1, 2)]
    x = random_chain_map(rng, h.source, h.target)
    return map_2(G.source, G.target, f, g, add(h, x))


def random_3x3_instance(seed, field: PrimeField = GF2, max_dim: int = 2, degree_span=(-1, 1),
                        coupled: bool = False):
    """Inputs ``(row1, row2, col1, col2, G_col, G_row)`` for the 3x3 completion.

    Both maps are distinguished.  With ``coupled`` the row map reuses the
    column map's homotopy (negated) and lightning strike (negated), which is
    what the classical cone construction produces; otherwise the two
    homotopies and strikes are drawn independently.
    """
    rng = as_rng(seed)
    u, u2, f, g, k = random_square(rng, field, max_dim, degree_span)
    row1, row2 = build_standard([u])[0], build_standard([u2])[0]
    col1, col2 = build_standard([f])[0], build_standard([g])[0]
    a, b2 = u.source, u2.target
    if coupled:
        k_row = scale(k, -1)
        t_col = random_chain_map(rng, shift(a, 1), b2)
        t_row = scale(t_col, -1)
    else:
        sys = LinearSystem(field)
        kv = sys.homotopic(compose(u2, f), compose(g, u))
        k_row = list(sys.samples(rng, 1))[-1][kv]
        t_col = random_chain_map(rng, shift(a, 1), b2)
        t_row = random_chain_map(rng, shift(a, 1), b2)
    G_col = apply_lightning(map_2(row1, row2, f, g, cone_map(u, u2, f, g, k)), t_col)
    G_row = apply_lightning(map_2(col1, col2, u, u2, cone_map(f, g, u, u2, k_row)), t_row)
    return row1, row2, col1, col2, G_col, G_row


def random_triangle(seed, n: int, field: PrimeField = GF2, max_dim: int = 2,
                    degree_span=(-1, 1)) -> NTriangle:
    return build_standard(random_base(seed, n, field, max_dim, degree_span))[0]
