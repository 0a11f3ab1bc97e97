import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fulltri.distinguished import build_standard, build_standard_2, check_distinguished_2
from fulltri.exact_linalg import GF2, PrimeField
from fulltri.harness_cli.generators import random_base, random_distinguished_map, random_triangle
from fulltri.homotopy_model import (
    ChainComplex, ChainMap, add, compose, direct_sum, find_homotopy, mapping_cone, negate, shift, zero_map,
)
from fulltri.ntriangle import (
    HOMOTOPY, STRICT, DiagramError, NTriangle, degenerate, direct_sum_maps, direct_sum_triangles,
    face_2, face_pi, face_sigma, from_balmer, rotate_map_tau, rotate_sigma, rotate_tau,
    rotate_tau_inverse, rotate_tau_power, shift_triangle, triangle_2, uvw, verify_diagram,
    verify_map, zero_triangle,
)
from fulltri.simplex_geometry import balmer_layout

F3 = PrimeField(3)
seeds = st.integers(0, 2**32 - 1)
fields = st.sampled_from([GF2, F3])


def tri(seed, n, fld=GF2):
    return random_triangle(seed, n, fld)


def test_standard_triangle_verifies_strictly():
    T = tri(1, 2)
    rep = verify_diagram(T, STRICT)
    assert rep.ok and rep.strict


def test_perturbed_third_map_fails():
    X = ChainComplex(GF2, {1: 1})
    Y = ChainComplex(GF2, {0: 1})
    u = zero_map(X, Y)
    cone = mapping_cone(u)
    x = ChainMap(cone.complex, shift(X, 1), {0: np.array([[0, 1]])})
    assert find_homotopy(x, zero_map(x.source, x.target)) is None
    T = triangle_2(u, cone.inclusion, add(cone.projection, x))
    # a 2-triangle carries no commutativity conditions; the damage shows up as
    # a non-distinguished triangle instead
    assert verify_diagram(T, HOMOTOPY).entries == []
    assert check_distinguished_2(T).no
    assert find_homotopy(compose(add(cone.projection, x), cone.inclusion), zero_map(Y, shift(X, 1))) is None


def test_bookkeeping_errors():
    T = tri(2, 2)
    edges = dict(T.edgemaps)
    del edges[(1, 0, 2)]
    with pytest.raises(DiagramError):
        NTriangle(2, T.objects, edges)


def test_tau_on_2_triangle():
    T = tri(3, 2)
    u, v, w = uvw(T)
    R = rotate_tau(T)
    assert uvw(R) == (v, w, negate(shift(u, 1)))
    assert rotate_tau_power(T, 3) == rotate_sigma(T)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_rotation_identities(n):
    for seed in range(3):
        T = tri(seed, n)
        assert rotate_sigma(T, 2) == shift_triangle(T, 2)
        assert rotate_tau_power(T, n + 1) == rotate_sigma(T, n - 1)
        assert rotate_tau_inverse(rotate_tau(T)) == T
        assert verify_diagram(rotate_tau(T)).ok


@settings(max_examples=20, deadline=None)
@given(seeds, fields)
def test_rotated_maps_stay_natural(seed, fld):
    G = random_distinguished_map(seed, fld)
    assert verify_map(rotate_map_tau(G)).ok


def test_octahedron_faces():
    T = tri(4, 3)
    F = face_pi(T, 0)
    assert F.objects[(0, 1)] == T.objects[(1, 2)]
    assert F.objects[(0, 2)] == T.objects[(1, 3)]
    assert F.objects[(1, 2)] == T.objects[(2, 3)]
    assert face_2(T, 1, 2, 3) == F
    S = face_sigma(T, 0)
    assert [S.vertices[s] for s in sorted(S.vertices)] == [(0, 1), (0, 2), (0, 3)]
    assert S.maps[(0, 1)] == T.edgemaps[(0, 1, 2)]


@pytest.mark.parametrize("n", [2, 3])
def test_degeneracies(n):
    T = tri(5, n)
    for i in range(n + 1):
        D = degenerate(T, i)
        assert D.n == n + 1
        assert face_pi(D, i) == T
        assert verify_diagram(D, HOMOTOPY).ok
        assert D.objects[(i, i + 1)].is_zero()
    with pytest.raises(IndexError):
        degenerate(T, n + 1)


def test_degenerate_2_triangle_at_2():
    T = tri(6, 2)
    D = degenerate(T, 2)
    assert D.objects[(0, 2)] == D.objects[(0, 3)] == T.objects[(0, 2)]
    assert D.edgemaps[(0, 2, 3)] == ChainMap(T.objects[(0, 2)], T.objects[(0, 2)],
                                             {k: np.eye(m, dtype=np.int64)
                                              for k, m in T.objects[(0, 2)].dims.items()})


def test_direct_sums():
    T = tri(7, 3)
    Z = zero_triangle(3, GF2)
    assert direct_sum_triangles(T, Z) == T
    G1, G2 = random_distinguished_map(1), random_distinguished_map(2)
    G = direct_sum_maps(G1, G2)
    for v in G.comps:
        assert G.comps[v] == direct_sum(G1.comps[v], G2.comps[v])
    assert verify_map(G).ok


def test_sum_of_standard_is_standard_on_sum():
    u1 = random_base(1, 2)[0]
    u2 = random_base(2, 2)[0]
    S = direct_sum_triangles(build_standard_2(u1)[0], build_standard_2(u2)[0])
    T = build_standard_2(direct_sum(u1, u2))[0]
    assert S.objects[(0, 1)] == T.objects[(0, 1)] and S.objects[(0, 2)] == T.objects[(0, 2)]
    assert S.objects[(1, 2)].dims == T.objects[(1, 2)].dims


@pytest.mark.parametrize("n", [2, 3, 4])
def test_from_balmer_rebuilds_triangles(n):
    T = tri(8, n)
    gens = {seg[3]: T.edgemaps[seg[3]] for seg in balmer_layout(n).segments()}
    rebuilt = from_balmer(n, T.objects, gens)
    for e, M in T.edgemaps.items():
        assert find_homotopy(rebuilt.edgemaps[e], M) is not None


@settings(max_examples=15, deadline=None)
@given(seeds, st.integers(2, 4), fields)
def test_built_triangles_verify(seed, n, fld):
    T, _ = build_standard(random_base(seed, n, fld))
    assert verify_diagram(T, STRICT).ok
