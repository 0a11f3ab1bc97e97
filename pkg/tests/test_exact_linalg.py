from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fulltri.exact_linalg import GF2, PrimeField, block, diag, rank, solve_affine

fields = st.sampled_from([2, 3, 5]).map(PrimeField)


@st.composite
def small_matrices(draw, max_rows=4, max_cols=4):
    fld = draw(fields)
    m = draw(st.integers(0, max_rows))
    n = draw(st.integers(0, max_cols))
    entries = draw(st.lists(st.integers(0, fld.p - 1), min_size=m * n, max_size=m * n))
    return fld, np.array(entries, dtype=np.int64).reshape(m, n)


def brute_rank(M, p):
    """log_p of the size of the row space, by enumerating combinations."""
    m, n = M.shape
    if m == 0 or n == 0:
        return 0
    span = {tuple(np.array(c, dtype=np.int64) @ M % p) for c in product(range(p), repeat=m)}
    r = 0
    while p ** r < len(span):
        r += 1
    return r


def brute_solutions(A, b, p):
    n = A.shape[1]
    return [x for x in product(range(p), repeat=n) if np.array_equal(A @ np.array(x, dtype=np.int64) % p, b % p)]


def test_rank_examples():
    assert rank(np.eye(3, dtype=np.int64)) == 3
    assert rank(np.zeros((2, 5), dtype=np.int64)) == 0
    assert rank([[1, 1], [1, 1]]) == 1


def test_solve_examples():
    b = np.array([1, 0, 1])
    sol = solve_affine(np.eye(3, dtype=np.int64), b)
    assert np.array_equal(sol.particular, b) and sol.kernel_dim == 0
    sol = solve_affine(np.zeros((2, 2), dtype=np.int64), [0, 0])
    assert np.array_equal(sol.particular, [0, 0]) and sol.kernel_dim == 2
    assert solve_affine([[1, 1], [0, 0]], [1, 1], GF2) is None


def test_block_examples():
    F3 = PrimeField(3)
    assert np.array_equal(diag([np.array([[2]]), np.array([[1]])], F3), [[2, 0], [0, 1]])
    assert np.array_equal(block([[1, 0]], GF2, row_sizes=[1], col_sizes=[1, 1]), [[1, 0]])
    up, g, v = np.array([[1], [1]]), np.array([[0, 1], [1, 0]]), np.array([[1, 1]])
    M = block([[up, g], [0, -v]], F3)
    assert np.array_equal(M, [[1, 0, 1], [1, 1, 0], [0, 2, 2]])


def test_field_validation():
    with pytest.raises(ValueError):
        PrimeField(4)
    assert PrimeField(7).inv(3) == 5


@settings(max_examples=150, deadline=None)
@given(small_matrices(3, 4))
def test_rank_matches_brute_force(fm):
    fld, M = fm
    assert rank(M, fld) == brute_rank(M, fld.p)


@settings(max_examples=150, deadline=None)
@given(small_matrices(3, 3), st.data())
def test_solve_matches_brute_force(fm, data):
    fld, A = fm
    b = np.array(data.draw(st.lists(st.integers(0, fld.p - 1), min_size=A.shape[0], max_size=A.shape[0])),
                 dtype=np.int64)
    sol = solve_affine(A, b, fld)
    found = brute_solutions(A, b, fld.p)
    if sol is None:
        assert not found
        return
    assert tuple(sol.particular) in found
    assert fld.p ** sol.kernel_dim == len(found)
    for row in sol.nullspace:
        assert not np.any(A @ row % fld.p)


@given(small_matrices())
def test_rank_nullity(fm):
    fld, A = fm
    sol = solve_affine(A, np.zeros(A.shape[0], dtype=np.int64), fld)
    assert rank(A, fld) + sol.kernel_dim == A.shape[1]


@given(small_matrices(), st.data())
def test_matmul_reduced(fm, data):
    fld, A = fm
    k = data.draw(st.integers(0, 3))
    B = np.array(data.draw(st.lists(st.integers(0, fld.p - 1), min_size=A.shape[1] * k,
                                    max_size=A.shape[1] * k)), dtype=np.int64).reshape(A.shape[1], k)
    C = fld.matmul(A, B)
    assert C.shape == (A.shape[0], k)
    assert np.array_equal(C, (A @ B) % fld.p)
