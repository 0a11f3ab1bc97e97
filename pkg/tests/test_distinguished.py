from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fulltri.distinguished import (
    FIVE_TRIANGLE_FACES, SUM_FACE, CompletionError, apply_lightning, build_five_triangle,
    build_standard, build_standard_2, build_sum_witness, check_distinguished, check_distinguished_2,
    check_distinguished_map, check_distinguished_map_2, check_map_sum, check_sum_theorem,
    complete_3x3, complete_base_map, cone_map, extend_map_to_3triangle, face_cycle, face_verdicts,
    is_good, lightning_difference, mapping_cone_of_map, neeman_N, neeman_Ndoubleprime,
    neeman_Nprime, recheck_certificate, recheck_map_witness, recheck_verdict, verify_3x3,
)
from fulltri.exact_linalg import GF2, PrimeField
from fulltri.harness_cli.generators import (
    random_3x3_instance, random_base, random_chain_map, random_distinguished_map, random_square,
    random_triangle,
)
from fulltri.homotopy_model import (
    ChainComplex, ChainMap, Homotopy, complex_from, direct_sum, identity, is_contractible,
    is_homotopy_equivalence, negate, shift, zero_complex, zero_map,
)
from fulltri.ntriangle import (
    STRICT, face_2, fgh, identity_map, map_2, triangle_2, uvw, verify_diagram,
    verify_map,
)

F3 = PrimeField(3)
seeds = st.integers(0, 2**32 - 1)
fields = st.sampled_from([GF2, F3])


def point(fld=GF2, deg=0):
    return ChainComplex(fld, {deg: 1})


# -------------------------------------------------------------- builder

def test_standard_2_triangle():
    u = random_base(1, 2)[0]
    T, cert = build_standard([u])
    assert uvw(T)[0] == u
    assert T.objects[(1, 2)].dims == {n: u.source.dim(n + 1) + u.target.dim(n)
                                       for n in T.objects[(1, 2)].dims}
    assert recheck_certificate(cert, T)
    K, _ = build_standard_2(identity(u.source))
    assert is_contractible(K.objects[(1, 2)]) is not None


@settings(max_examples=10, deadline=None)
@given(seeds, st.integers(2, 5), fields)
def test_built_triangles_are_distinguished(seed, n, fld):
    T, cert = build_standard(random_base(seed, n, fld))
    assert verify_diagram(T, STRICT).ok
    assert recheck_certificate(cert, T)
    for xyz, v in face_verdicts(T).items():
        assert v.yes and recheck_verdict(v, face_2(T, *xyz))


# -------------------------------------------------------------- deciders

def test_identity_triangle_is_distinguished():
    a = point()
    T = triangle_2(identity(a), zero_map(a, zero_complex()), zero_map(zero_complex(), shift(a, 1)))
    v = check_distinguished_2(T)
    assert v.yes and recheck_verdict(v, T)


def test_point_zero_zero_is_not_distinguished():
    X = point()
    Z = zero_complex()
    T = triangle_2(zero_map(X, Z), zero_map(Z, Z), zero_map(Z, shift(X, 1)))
    assert check_distinguished_2(T).no


def brute_2_triangle(T):
    """Search every map phi: C(u) -> c over GF(2) with phi i = v, w phi = pi
    (exact equality suffices here because all differentials vanish)."""
    u, v, w = uvw(T)
    S, _ = build_standard_2(u)
    _, i, p = uvw(S)
    C, c = S.objects[(1, 2)], T.objects[(1, 2)]
    slots = [(n, c.dim(n), C.dim(n)) for n in C.degrees]
    size = sum(r * k for _, r, k in slots)
    for entries in product(range(2), repeat=size):
        comps, pos = {}, 0
        for n, r, k in slots:
            comps[n] = np.array(entries[pos:pos + r * k], dtype=np.int64).reshape(r, k)
            pos += r * k
        phi = ChainMap(C, c, comps)
        from fulltri.homotopy_model import compose
        if compose(phi, i) == v and compose(w, phi) == p and is_homotopy_equivalence(phi, False).yes:
            return True
    return False


@pytest.mark.parametrize("bits", list(product(range(2), repeat=3)))
def test_decider_matches_brute_force_on_points(bits):
    # a -> b -> c -> a[1] with a, b, c one-dimensional, all differentials zero
    a, b, c = point(deg=1), point(deg=1), point(deg=1)
    A1 = shift(a, 1)
    c = point(deg=1)
    u = ChainMap(a, b, {1: [[bits[0]]]})
    v = ChainMap(b, c, {1: [[bits[1]]]})
    w = zero_map(c, A1)
    T = triangle_2(u, v, w)
    assert check_distinguished_2(T).yes == brute_2_triangle(T)


# ------------------------------------------------------------------ maps

def test_identity_map_distinguished():
    T = random_triangle(1, 2)
    v = check_distinguished_map_2(identity_map(T))
    assert v.yes
    assert not any(M.any() for M in v.witness.k.comps.values())
    assert recheck_map_witness(v.witness)


@settings(max_examples=15, deadline=None)
@given(seeds, fields)
def test_cone_maps_distinguished(seed, fld):
    u, u2, f, g, k = random_square(seed, fld)
    S, T = build_standard([u])[0], build_standard([u2])[0]
    G = map_2(S, T, f, g, cone_map(u, u2, f, g, k))
    v = check_distinguished_map_2(G)
    assert v.yes and recheck_map_witness(v.witness)
    assert is_good(G).yes


def test_non_lightning_defect_is_not_distinguished():
    # u = 0: X[-1] -> Y, so the cone is X + Y
    X, Y = point(), point()
    u = zero_map(shift(X, -1), Y)
    S, _ = build_standard_2(u)
    c = S.objects[(1, 2)]
    h = ChainMap(c, c, {0: np.array([[1, 0], [0, 0]])})
    G = map_2(S, S, zero_map(u.source, u.source), zero_map(Y, Y), h)
    # over a field every natural map is distinguished, so the defect has to
    # break naturality on the w square
    assert [e.edge for e in verify_map(G).entries if e.status == "fails"] == [(1, 0, 2)]
    assert check_distinguished_map_2(G).no


def test_lightning_examples():
    G = random_distinguished_map(4)
    got = lightning_difference(G, G)
    assert got is not None
    tau, s = got
    assert not any(M.any() for M in tau.comps.values())
    w = uvw(G.source)[2]
    v2 = uvw(G.target)[1]
    t0 = random_chain_map(9, w.target, v2.source)
    assert apply_lightning(G, zero_map(w.target, v2.source)) == G
    H = apply_lightning(G, t0)
    assert apply_lightning(H, negate(t0)) == G
    assert lightning_difference(G, H) is not None


@settings(max_examples=20, deadline=None)
@given(seeds, fields)
def test_lightning_preserves_distinguished(seed, fld):
    G = random_distinguished_map(seed, fld)
    assert check_distinguished_map_2(G).yes


@settings(max_examples=15, deadline=None)
@given(seeds, fields)
def test_two_completions_differ_by_lightning(seed, fld):
    u, u2, f, g, k = random_square(seed, fld)
    S, T = build_standard([u])[0], build_standard([u2])[0]
    G1 = complete_base_map([f, g], S, T)
    G2 = apply_lightning(map_2(S, T, f, g, cone_map(u, u2, f, g, k)),
                         random_chain_map(seed, shift(u.source, 1), u2.target))
    assert check_distinguished_map_2(G1).yes and check_distinguished_map_2(G2).yes
    assert lightning_difference(G1, G2) is not None


# -------------------------------------------------------- good / Neeman

def test_identity_is_good():
    T = random_triangle(3, 2)
    C = mapping_cone_of_map(identity_map(T))
    assert is_good(identity_map(T)).yes
    assert verify_diagram(C).ok and check_distinguished_2(C).yes


def test_neeman_shapes():
    G = random_distinguished_map(5)
    f, g, h = fgh(G)
    N = neeman_N(G)
    first = N.comps[(0, 1)]
    assert first == identity(first.source)
    u, v, w = uvw(G.source)
    u2, v2, _ = uvw(G.target)
    third = N.comps[(1, 2)]
    from fulltri.homotopy_model import block_map
    assert third == block_map([v2.target, shift(u.source, 1)], [v2.source, w.source],
                              [[v2, h], [0, negate(w)]])
    assert neeman_Ndoubleprime(G).comps[(1, 2)] == block_map([v2.target], [v2.source, w.source], [[v2, h]])
    assert verify_map(neeman_Nprime(G)).ok


@settings(max_examples=10, deadline=None)
@given(seeds, fields, st.booleans())
def test_neeman_verdicts_agree(seed, fld, bent):
    from fulltri.harness_cli.generators import perturb_third
    G = random_distinguished_map(seed, fld)
    if bent:
        G = perturb_third(seed, G)
        if not verify_map(G).ok:
            return
    base = check_distinguished_map(G).status
    for build in (neeman_N, neeman_Nprime, neeman_Ndoubleprime):
        assert check_distinguished_map(build(G)).status == base


# ---------------------------------------------------------- sum theorem

def test_sum_examples():
    T = random_triangle(6, 2)
    I = identity_map(T)
    rep = check_sum_theorem(I, I)
    assert rep.first.yes and rep.second.yes and rep.total.yes
    assert check_map_sum(I, I).yes


@settings(max_examples=10, deadline=None)
@given(seeds, fields)
def test_sum_of_distinguished_maps(seed, fld):
    u, u2, f, g, _ = random_square(seed, fld)
    S, T = build_standard([u])[0], build_standard([u2])[0]
    G1 = complete_base_map([f, g], S, T)
    G2 = apply_lightning(G1, random_chain_map(seed, shift(u.source, 1), u2.target))
    assert check_map_sum(G1, G2).yes
    rep = check_sum_theorem(G1, G2)
    assert rep.total.yes


def test_sum_detects_defect():
    X, Y = point(), point()
    u = zero_map(shift(X, -1), Y)
    S, _ = build_standard_2(u)
    c = S.objects[(1, 2)]
    bad = map_2(S, S, zero_map(u.source, u.source), zero_map(Y, Y),
                ChainMap(c, c, {0: np.array([[1, 0], [0, 0]])}))
    rep = check_sum_theorem(identity_map(S), bad)
    assert rep.first.yes and rep.second.no and rep.total.no


def test_sum_witness():
    u, u2, f, g, _ = random_square(3)
    v, v2, f2, g2, _ = random_square(4)
    S1, T1 = build_standard([u])[0], build_standard([u2])[0]
    S2, T2 = build_standard([v])[0], build_standard([v2])[0]
    G1, G2, G = build_sum_witness(f, g, f2, g2, S1, T1, S2, T2)
    assert check_distinguished_map_2(G).yes


# ---------------------------------------------------------- five-triangle

@settings(max_examples=5, deadline=None)
@given(seeds, fields)
def test_five_triangle(seed, fld):
    T1, T2 = random_triangle(seed, 2, fld), random_triangle(seed + 1, 2, fld)
    F, _ = build_five_triangle(T1, T2)
    assert verify_diagram(F).ok
    for xyz in FIVE_TRIANGLE_FACES:
        assert check_distinguished_2(face_2(F, *xyz)).yes
    u1, v1, w1 = uvw(T1)
    u2, v2, w2 = uvw(T2)
    assert F.objects[(1, 2)] == u1.source
    assert uvw(face_2(F, *SUM_FACE)) == (direct_sum(u1, u2), direct_sum(v1, v2), direct_sum(w1, w2))


def test_five_triangle_with_degenerate_second():
    T1 = random_triangle(2, 2)
    a = point()
    T2 = triangle_2(identity(a), zero_map(a, zero_complex()), zero_map(zero_complex(), shift(a, 1)))
    F, _ = build_five_triangle(T1, T2)
    assert F.objects[(3, 4)].is_zero()
    assert verify_diagram(F).ok


# --------------------------------------------------- base maps and cycles

@settings(max_examples=5, deadline=None)
@given(seeds)
def test_complete_base_map_n3(seed):
    from fulltri.harness_cli.generators import random_base_map
    base = random_base(seed, 3)
    S = build_standard(base)[0]
    target, fs = random_base_map(seed, base)
    T = build_standard(target)[0]
    G = complete_base_map(fs, S, T)
    assert verify_map(G).ok
    assert check_distinguished_map(G).yes


def test_complete_base_map_identity():
    T = random_triangle(7, 3)
    G = complete_base_map([identity(T.obj(0, j)) for j in (1, 2, 3)], T, T)
    for f in G.comps.values():
        assert is_homotopy_equivalence(f, False).yes


@pytest.mark.parametrize("n,seed", [(2, 1), (3, 2), (3, 3), (4, 4)])
def test_face_cycle(n, seed):
    T = random_triangle(seed, n)
    steps = face_cycle(T)
    assert len(steps) == n + 1
    for G, v in steps:
        assert verify_map(G).ok
        assert v.yes


def test_extend_map_identity_and_standard():
    u, u2, f, g, k = random_square(5)
    a = u.source
    S = build_standard([u])[0]
    T = build_standard([compose_(g, u)])[0]
    G = complete_base_map([identity(a), g], S, T)
    O = extend_map_to_3triangle(G)
    assert verify_diagram(O.triangle).ok
    F3_, F2_ = face_2(O.triangle, 0, 1, 2), face_2(O.triangle, 0, 1, 3)
    assert F3_ == G.source and F2_ == G.target
    assert check_distinguished(O.triangle).yes


def compose_(g, f):
    from fulltri.homotopy_model import compose
    return compose(g, f)


# ---------------------------------------------------------------- 3x3

@settings(max_examples=10, deadline=None)
@given(seeds, fields)
def test_coupled_3x3_completes(seed, fld):
    args = random_3x3_instance(seed, fld, coupled=True)
    D = complete_3x3(*args)
    rep = verify_3x3(D)
    assert rep["ok"]
    row1, row2, col1, col2, G_col, G_row = args
    assert D.rows[0] == row1 and D.rows[1] == row2
    assert D.cols[0] == col1 and D.cols[1] == col2
    assert uvw(D.cols[2]) [0] == fgh(G_col)[2]
    assert uvw(D.rows[2])[0] == fgh(G_row)[2]


def test_3x3_identity_columns():
    u = random_base(3, 2)[0]
    row = build_standard([u])[0]
    f, g = identity(u.source), identity(u.target)
    col1, col2 = build_standard([f])[0], build_standard([g])[0]
    G_col = map_2(row, row, f, g, identity(row.obj(1, 2)))
    G_row = map_2(col1, col2, u, u, cone_map(f, g, u, u, None))
    D = complete_3x3(row, row, col1, col2, G_col, G_row)
    assert verify_3x3(D)["ok"]
    for v in (D.rows[2].obj(0, 1), D.rows[2].obj(0, 2), D.rows[2].obj(1, 2)):
        assert is_contractible(v) is not None


def _hand_counterexample(lam, mu):
    """a = F in degree 0, b = a' = 0, b' = F[1]; h = lam and u'' = mu."""
    a = complex_from(GF2, {0: 1})
    z = zero_complex(GF2)
    b2 = complex_from(GF2, {-1: 1})
    u, u2, f, g = zero_map(a, z), zero_map(z, b2), zero_map(a, z), zero_map(z, b2)
    row1, row2 = build_standard([u])[0], build_standard([u2])[0]
    col1, col2 = build_standard([f])[0], build_standard([g])[0]
    h = cone_map(u, u2, f, g, Homotopy(a, b2, {0: np.array([[lam]])}))
    uu = cone_map(f, g, u, u2, Homotopy(a, b2, {0: np.array([[mu]])}))
    return row1, row2, col1, col2, map_2(row1, row2, f, g, h), map_2(col1, col2, u, u2, uu)


def test_3x3_counterexample_is_certified():
    args = _hand_counterexample(1, 0)
    G_col, G_row = args[4], args[5]
    assert check_distinguished_map_2(G_col).yes and check_distinguished_map_2(G_row).yes
    with pytest.raises(CompletionError) as info:
        complete_3x3(*args)
    assert info.value.certified
    # the matching choice completes
    assert verify_3x3(complete_3x3(*_hand_counterexample(1, 1)))["ok"]


def test_independent_3x3_failures_are_certified():
    ok = failed = 0
    for seed in range(40):
        try:
            D = complete_3x3(*random_3x3_instance(seed, GF2))
        except CompletionError as exc:
            assert exc.certified
            failed += 1
            continue
        assert verify_3x3(D)["ok"]
        ok += 1
    assert ok + failed == 40 and ok > 0
