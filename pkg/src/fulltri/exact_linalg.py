"""Dense exact linear algebra over prime fields GF(p).

Matrices are plain 2-D ``numpy`` integer arrays whose entries are kept
reduced to ``[0, p)``.  Elimination uses a fixed pivoting order (first
nonzero row, columns left to right) so that every result is bit-exact
reproducible.  GF(2) takes a fast XOR path on ``uint8`` arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

PrimeFieldMatrix = np.ndarray


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int = 2

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"field modulus must be prime, got {self.p}")
        if self.p > 46337:
            # products of two residues must fit in int64
            raise ValueError("modulus too large for int64 arithmetic")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return pow(int(a), self.p - 2, self.p)

    def reduce(self, M) -> PrimeFieldMatrix:
        return np.mod(np.asarray(M, dtype=np.int64), self.p)

    def zeros(self, rows: int, cols: int) -> PrimeFieldMatrix:
        return np.zeros((rows, cols), dtype=np.int64)

    def eye(self, n: int) -> PrimeFieldMatrix:
        return np.eye(n, dtype=np.int64)

    def matmul(self, A, B) -> PrimeFieldMatrix:
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if A.shape[1] == 0:
            return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        if self.p == 2 or A.shape[1] * (self.p - 1) ** 2 < 2**62:
            return (A @ B) % self.p
        out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        for k in range(A.shape[1]):
            out = (out + np.outer(A[:, k], B[k, :])) % self.p
        return out


GF2 = PrimeField(2)


def _rref(M: np.ndarray, p: int, ncols: int | None = None):
    """Reduced row echelon form; pivots searched in the first ``ncols`` columns."""
    m, n = M.shape
    if ncols is None:
        ncols = n
    if p == 2:
        R = (M % 2).astype(np.uint8)
    else:
        R = (M % p).astype(np.int64)
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        if row == m:
            break
        nz = np.flatnonzero(R[row:, col])
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            R[[row, piv]] = R[[piv, row]]
        if p == 2:
            hits = np.flatnonzero(R[:, col])
            hits = hits[hits != row]
            if hits.size:
                R[hits] ^= R[row]
        else:
            inv = pow(int(R[row, col]), p - 2, p)
            if inv != 1:
                R[row] = (R[row] * inv) % p
            hits = np.flatnonzero(R[:, col])
            hits = hits[hits != row]
            if hits.size:
                R[hits] = (R[hits] - np.outer(R[hits, col], R[row])) % p
        pivots.append(col)
        row += 1
    return R.astype(np.int64), pivots


def rank(M, field: PrimeField = GF2) -> int:
    M = np.asarray(M, dtype=np.int64)
    if M.size == 0:
        return 0
    return len(_rref(M, field.p)[1])


@dataclass
class AffineSolution:
    """One particular solution of ``A x = b`` plus a basis of ``ker A``."""

    particular: np.ndarray
    nullspace: np.ndarray  # shape (k, n); rows are basis vectors

    @property
    def kernel_dim(self) -> int:
        return self.nullspace.shape[0]

    def sample(self, coeffs, field: PrimeField) -> np.ndarray:
        coeffs = np.asarray(coeffs, dtype=np.int64)
        if self.kernel_dim == 0:
            return self.particular.copy()
        return (self.particular + coeffs @ self.nullspace) % field.p


def solve_affine(A, b, field: PrimeField = GF2, want_kernel: bool = True) -> AffineSolution | None:
    """Solve ``A x = b`` exactly; ``None`` when inconsistent.

    Free variables are set to zero in the particular solution, so a zero
    right-hand side always yields the zero solution.
    """
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    if A.ndim != 2:
        raise ValueError("A must be two-dimensional")
    m, n = A.shape
    if b.shape[0] != m:
        raise ValueError(f"dimension mismatch: A has {m} rows, b has {b.shape[0]}")
    p = field.p
    if m == 0:
        x = np.zeros(n, dtype=np.int64)
        ker = np.eye(n, dtype=np.int64) if want_kernel else np.zeros((0, n), np.int64)
        return AffineSolution(x, ker)
    aug = np.concatenate([A % p, (b % p)[:, None]], axis=1)
    R, pivots = _rref(aug, p, ncols=n)
    r = len(pivots)
    if np.any(R[r:, n]):
        return None
    x = np.zeros(n, dtype=np.int64)
    x[pivots] = R[:r, n]
    if not want_kernel:
        return AffineSolution(x, np.zeros((0, n), dtype=np.int64))
    pset = set(pivots)
    free = [c for c in range(n) if c not in pset]
    ker = np.zeros((len(free), n), dtype=np.int64)
    for i, c in enumerate(free):
        ker[i, c] = 1
        ker[i, pivots] = (-R[:r, c]) % p
    return AffineSolution(x, ker)


def block(grid: Sequence[Sequence], field: PrimeField = GF2,
          row_sizes: Sequence[int] | None = None,
          col_sizes: Sequence[int] | None = None) -> PrimeFieldMatrix:
    """Assemble a block matrix.

    Entries may be arrays, ``0``/``None`` (zero block) or an ``int`` scalar
    (scalar multiple of the identity).  Band sizes are inferred from array
    blocks; pass ``row_sizes``/``col_sizes`` when a band holds no array.
    """
    nr = len(grid)
    nc = len(grid[0]) if nr else 0
    if any(len(r) != nc for r in grid):
        raise ValueError("ragged block grid")
    rs = list(row_sizes) if row_sizes is not None else [None] * nr
    cs = list(col_sizes) if col_sizes is not None else [None] * nc
    for i, r in enumerate(grid):
        for j, blk in enumerate(r):
            if isinstance(blk, np.ndarray):
                for sizes, k, v in ((rs, i, blk.shape[0]), (cs, j, blk.shape[1])):
                    if sizes[k] is None:
                        sizes[k] = v
                    elif sizes[k] != v:
                        raise ValueError(f"inconsistent band size at block ({i}, {j})")
    # square scalar blocks pin the missing partner size
    for i, r in enumerate(grid):
        for j, blk in enumerate(r):
            if isinstance(blk, (int, np.integer)) and blk != 0:
                if rs[i] is None and cs[j] is not None:
                    rs[i] = cs[j]
                if cs[j] is None and rs[i] is not None:
                    cs[j] = rs[i]
                if rs[i] != cs[j]:
                    raise ValueError(f"scalar block ({i}, {j}) is not square")
    if None in rs or None in cs:
        raise ValueError("cannot infer block band sizes")
    out = np.zeros((sum(rs), sum(cs)), dtype=np.int64)
    r0 = 0
    for i, r in enumerate(grid):
        c0 = 0
        for j, blk in enumerate(r):
            if isinstance(blk, np.ndarray):
                out[r0:r0 + rs[i], c0:c0 + cs[j]] = blk
            elif blk is not None and blk != 0:
                out[r0:r0 + rs[i], c0:c0 + cs[j]] = int(blk) * np.eye(rs[i], dtype=np.int64)
            c0 += cs[j]
        r0 += rs[i]
    return out % field.p


def diag(blocks: Sequence[np.ndarray], field: PrimeField = GF2) -> PrimeFieldMatrix:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out % field.p
