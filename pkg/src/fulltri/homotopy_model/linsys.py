"""Linear systems whose unknowns are chain maps and homotopies.

Every question "does there exist a map / homotopy such that ..." in the
model is linear in the unknown components.  An :class:`Expr` is a graded
linear expression ``S -> T`` of some degree whose degree-``n`` component is

    const(n) + sum_t  L_t(n) @ X_t^{m_t(n)} @ R_t(n)

where each ``X_t`` is an unknown.  Row-major vectorisation turns a term into
``kron(L, R^T) @ vec(X)``, and the constraints are stacked into one dense
system solved by :func:`fulltri.exact_linalg.solve_affine`.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Union

import numpy as np

from fulltri.exact_linalg import AffineSolution, PrimeField, rank, solve_affine
from fulltri.homotopy_model.complexes import (
    ChainComplex, ChainMap, ComplexError, Homotopy, homotopy_boundary,
)


class Unknown:
    """A graded unknown ``source -> target`` of degree 0 (chain map) or -1 (homotopy)."""

    def __init__(self, system: "LinearSystem", source: ChainComplex, target: ChainComplex,
                 degree: int, name: str):
        self.system = system
        self.source = source
        self.target = target
        self.degree = degree
        self.name = name
        self.offsets: dict[int, int] = {}
        self.shapes: dict[int, tuple[int, int]] = {}

    def __repr__(self):
        kind = "map" if self.degree == 0 else "homotopy"
        return f"Unknown({self.name}: {kind})"


@dataclass(frozen=True)
class _Term:
    L: np.ndarray
    var: Unknown
    m: int
    R: np.ndarray


class Expr:
    def __init__(self, source: ChainComplex, target: ChainComplex, degree: int,
                 comps: dict[int, tuple[list[_Term], np.ndarray]]):
        self.source = source
        self.target = target
        self.degree = degree
        self.comps = comps

    @property
    def field(self) -> PrimeField:
        return self.source.field

    # construction ---------------------------------------------------------
    @classmethod
    def of(cls, x: Union["Expr", Unknown, ChainMap, Homotopy]) -> "Expr":
        if isinstance(x, Expr):
            return x
        if isinstance(x, Unknown):
            comps = {}
            for n in x.source.degrees:
                r, c = x.target.dim(n + x.degree), x.source.dim(n)
                if r == 0:
                    continue
                comps[n] = ([_Term(np.eye(r, dtype=np.int64), x, n, np.eye(c, dtype=np.int64))],
                            np.zeros((r, c), dtype=np.int64))
            return cls(x.source, x.target, x.degree, comps)
        if isinstance(x, (ChainMap, Homotopy)):
            comps = {n: ([], x.comp(n)) for n in x.source.degrees if x.target.dim(n + x.degree)}
            return cls(x.source, x.target, x.degree, comps)
        raise TypeError(f"cannot build an expression from {type(x).__name__}")

    def component(self, n: int) -> tuple[list[_Term], np.ndarray]:
        got = self.comps.get(n)
        if got is None:
            return [], np.zeros((self.target.dim(n + self.degree), self.source.dim(n)), dtype=np.int64)
        return got

    # algebra ----------------------------------------------------------------
    def __add__(self, other) -> "Expr":
        other = Expr.of(other)
        if (self.source, self.target, self.degree) != (other.source, other.target, other.degree):
            raise ComplexError("adding expressions of different shape")
        p = self.field.p
        out = {}
        for n in set(self.comps) | set(other.comps):
            t1, c1 = self.component(n)
            t2, c2 = other.component(n)
            out[n] = (t1 + t2, (c1 + c2) % p)
        return Expr(self.source, self.target, self.degree, out)

    def __radd__(self, other):
        return Expr.of(other) + self

    def scale(self, c: int) -> "Expr":
        p = self.field.p
        out = {n: ([_Term((c * t.L) % p, t.var, t.m, t.R) for t in terms], (c * C) % p)
               for n, (terms, C) in self.comps.items()}
        return Expr(self.source, self.target, self.degree, out)

    def __neg__(self) -> "Expr":
        return self.scale(-1)

    def __sub__(self, other) -> "Expr":
        return self + (-Expr.of(other))

    def __rsub__(self, other):
        return Expr.of(other) - self

    def after(self, f: ChainMap | Homotopy) -> "Expr":
        """``self`` composed after the known map ``f``."""
        if f.target != self.source:
            raise ComplexError("expression is not composable after the given map")
        fld = self.field
        deg = self.degree + f.degree
        out = {}
        for n in f.source.degrees:
            mid = n + f.degree
            if mid not in self.comps or self.target.dim(n + deg) == 0:
                continue
            terms, C = self.comps[mid]
            F = f.comp(n)
            out[n] = ([_Term(t.L, t.var, t.m, fld.matmul(t.R, F)) for t in terms], fld.matmul(C, F))
        return Expr(f.source, self.target, deg, out)

    def then(self, g: ChainMap | Homotopy) -> "Expr":
        """The known map ``g`` composed after ``self``."""
        if g.source != self.target:
            raise ComplexError("given map is not composable after the expression")
        fld = self.field
        deg = self.degree + g.degree
        out = {}
        for n, (terms, C) in self.comps.items():
            mid = n + self.degree
            if g.target.dim(mid + g.degree) == 0:
                continue
            G = g.comp(mid)
            out[n] = ([_Term(fld.matmul(G, t.L), t.var, t.m, t.R) for t in terms], fld.matmul(G, C))
        return Expr(self.source, g.target, deg, out)

    def boundary(self) -> "Expr":
        """``d h + h d`` for a degree -1 expression ``h``."""
        if self.degree != -1:
            raise ComplexError("boundary() needs a homotopy-degree expression")
        S, T = self.source, self.target
        fld = self.field
        out = {}
        for n in S.degrees:
            if T.dim(n) == 0:
                continue
            terms: list[_Term] = []
            C = np.zeros((T.dim(n), S.dim(n)), dtype=np.int64)
            if n in self.comps and T.dim(n - 1):
                t1, c1 = self.comps[n]
                D = T.d(n - 1)
                terms += [_Term(fld.matmul(D, t.L), t.var, t.m, t.R) for t in t1]
                C = C + fld.matmul(D, c1)
            if n + 1 in self.comps and S.dim(n + 1):
                t2, c2 = self.comps[n + 1]
                D = S.d(n)
                terms += [_Term(t.L, t.var, t.m, fld.matmul(t.R, D)) for t in t2]
                C = C + fld.matmul(c2, D)
            out[n] = (terms, C % fld.p)
        return Expr(S, T, 0, out)

    def chain_defect(self) -> "Expr":
        """``d f - f d`` viewed as a degree +1 expression."""
        if self.degree != 0:
            raise ComplexError("chain_defect() needs a degree-0 expression")
        S, T = self.source, self.target
        fld = self.field
        out = {}
        for n in S.degrees:
            if T.dim(n + 1) == 0:
                continue
            terms: list[_Term] = []
            C = np.zeros((T.dim(n + 1), S.dim(n)), dtype=np.int64)
            if n in self.comps:
                t1, c1 = self.comps[n]
                D = T.d(n)
                terms += [_Term(fld.matmul(D, t.L), t.var, t.m, t.R) for t in t1]
                C = C + fld.matmul(D, c1)
            if n + 1 in self.comps and S.dim(n + 1):
                t2, c2 = self.comps[n + 1]
                D = S.d(n)
                terms += [_Term((-t.L) % fld.p, t.var, t.m, fld.matmul(t.R, D)) for t in t2]
                C = C - fld.matmul(c2, D)
            out[n] = (terms, C % fld.p)
        return Expr(S, T, 1, out)


def place(e, source: ChainComplex, target: ChainComplex, src_parts, tgt_parts,
          row: int, col: int) -> Expr:
    """Put the expression ``e`` into block ``(row, col)`` of a graded block map."""
    e = Expr.of(e)
    (A, oa), (B, ob) = src_parts[col], tgt_parts[row]
    if e.source != A or e.target != B or ob != oa + e.degree:
        raise ComplexError("expression does not fit the chosen block")
    out = {}
    for n in source.degrees:
        if target.dim(n) == 0:
            continue
        rs = [C.dim(n + o) for C, o in tgt_parts]
        cs = [C.dim(n + o) for C, o in src_parts]
        r0, c0 = sum(rs[:row]), sum(cs[:col])
        Lp = np.zeros((target.dim(n), rs[row]), dtype=np.int64)
        Lp[r0:r0 + rs[row], :] = np.eye(rs[row], dtype=np.int64)
        Rp = np.zeros((cs[col], source.dim(n)), dtype=np.int64)
        Rp[:, c0:c0 + cs[col]] = np.eye(cs[col], dtype=np.int64)
        terms, C = e.component(n + oa)
        out[n] = ([_Term(Lp @ t.L, t.var, t.m, t.R @ Rp) for t in terms], Lp @ C @ Rp)
    return Expr(source, target, 0, out)


def shifted(e, k: int = 1) -> Expr:
    """``e[k]`` for a degree-0 expression (no sign, like chain maps)."""
    from fulltri.homotopy_model.complexes import shift
    e = Expr.of(e)
    if e.degree != 0:
        raise ComplexError("shifted() is for degree-0 expressions")
    S, T = shift(e.source, k), shift(e.target, k)
    return place(e, S, T, [(e.source, k)], [(e.target, k)], 0, 0)


def _as_expr(x) -> Expr:
    return Expr.of(x)


class Solution:
    """Values for every unknown of a solved :class:`LinearSystem`."""

    def __init__(self, system: "LinearSystem", vector: np.ndarray):
        self.system = system
        self.vector = vector

    def __getitem__(self, var: Unknown) -> ChainMap | Homotopy:
        comps = {}
        for n, off in var.offsets.items():
            r, c = var.shapes[n]
            comps[n] = self.vector[off:off + r * c].reshape(r, c)
        cls = ChainMap if var.degree == 0 else Homotopy
        return cls(var.source, var.target, comps)


class LinearSystem:
    def __init__(self, field: PrimeField):
        self.field = field
        self.unknowns: list[Unknown] = []
        self.size = 0
        self._blocks: list[tuple[list[tuple[np.ndarray, int]], np.ndarray]] = []
        self._solved: AffineSolution | None = None
        self._status: str | None = None

    # unknowns -----------------------------------------------------------
    def _new(self, source, target, degree, name) -> Unknown:
        if source.p != self.field.p or target.p != self.field.p:
            raise ComplexError("unknown lives over a different field")
        var = Unknown(self, source, target, degree, name or f"x{len(self.unknowns)}")
        for n in source.degrees:
            r, c = target.dim(n + degree), source.dim(n)
            if r == 0:
                continue
            var.offsets[n] = self.size
            var.shapes[n] = (r, c)
            self.size += r * c
        self.unknowns.append(var)
        self._solved = self._status = None
        return var

    def chain_map(self, source: ChainComplex, target: ChainComplex, name: str = "") -> Unknown:
        var = self._new(source, target, 0, name)
        self.require_zero(Expr.of(var).chain_defect())
        return var

    def graded_map(self, source: ChainComplex, target: ChainComplex, name: str = "") -> Unknown:
        """A degree-0 unknown without the chain-map constraint."""
        return self._new(source, target, 0, name)

    def homotopy(self, source: ChainComplex, target: ChainComplex, name: str = "") -> Unknown:
        return self._new(source, target, -1, name)

    # constraints -------------------------------------------------------
    def require_zero(self, e) -> None:
        e = _as_expr(e)
        p = self.field.p
        for n, (terms, C) in sorted(e.comps.items()):
            if C.size == 0:
                continue
            coeffs: list[tuple[np.ndarray, int]] = []
            for t in terms:
                if t.var.system is not self:
                    raise ComplexError("unknown belongs to another system")
                if t.m not in t.var.offsets:
                    continue
                K = np.kron(t.L, t.R.T) % p
                if K.any():
                    coeffs.append((K, t.var.offsets[t.m]))
            self._blocks.append((coeffs, (-C.reshape(-1)) % p))
        self._solved = self._status = None

    def require_equal(self, a, b) -> None:
        self.require_zero(_as_expr(a) - _as_expr(b))

    def homotopic(self, a, b=None, name: str = "") -> Unknown:
        """Require ``a ~ b`` (or ``a ~ 0``); returns the witnessing homotopy unknown."""
        e = _as_expr(a) if b is None else _as_expr(a) - _as_expr(b)
        if e.degree != 0:
            raise ComplexError("homotopic() compares degree-0 expressions")
        s = self.homotopy(e.source, e.target, name)
        self.require_zero(e - Expr.of(s).boundary())
        return s

    # solving -------------------------------------------------------------
    def matrix(self) -> tuple[np.ndarray, np.ndarray]:
        rows = sum(b.shape[0] for _, b in self._blocks)
        A = np.zeros((rows, self.size), dtype=np.int64)
        rhs = np.zeros(rows, dtype=np.int64)
        r = 0
        for coeffs, b in self._blocks:
            k = b.shape[0]
            for K, off in coeffs:
                A[r:r + k, off:off + K.shape[1]] += K
            rhs[r:r + k] = b
            r += k
        return A % self.field.p, rhs

    def fingerprint(self) -> str:
        A, b = self.matrix()
        h = hashlib.sha256()
        h.update(f"p={self.field.p};{A.shape}".encode())
        h.update(np.ascontiguousarray(A, dtype=np.int64).tobytes())
        h.update(np.ascontiguousarray(b, dtype=np.int64).tobytes())
        return h.hexdigest()[:16]

    def affine(self) -> AffineSolution | None:
        if self._solved is None and self._status != "none":
            A, b = self.matrix()
            self._solved = solve_affine(A, b, self.field)
            self._status = "none" if self._solved is None else "ok"
        return self._solved

    def solve(self) -> Solution | None:
        sol = self.affine()
        if sol is None:
            return None
        return Solution(self, sol.particular)

    def samples(self, rng: np.random.Generator, count: int):
        """Yield ``count`` uniformly random solutions (after the particular one)."""
        sol = self.affine()
        if sol is None:
            return
        yield Solution(self, sol.particular)
        if sol.kernel_dim == 0:
            return
        for _ in range(count):
            coeffs = rng.integers(0, self.field.p, size=sol.kernel_dim)
            yield Solution(self, sol.sample(coeffs, self.field))

    @property
    def kernel_dim(self) -> int:
        sol = self.affine()
        return -1 if sol is None else sol.kernel_dim

    def _flatten(self, var: Unknown, f) -> np.ndarray:
        v = np.zeros(self.size, dtype=np.int64)
        for n, off in var.offsets.items():
            r, c = var.shapes[n]
            v[off:off + r * c] = f.comp(n).reshape(-1)
        return v

    def class_basis(self, var: Unknown) -> tuple[ChainMap, list[ChainMap]] | None:
        """Solutions for the chain-map unknown ``var`` up to homotopy.

        Returns a particular value and directions whose span, modulo
        null-homotopic maps, is every solution value of ``var``; ``None`` when
        the system is unsolvable.  Only meaningful when the constraints on
        ``var`` are homotopy invariant (as those built by :meth:`homotopic` are).
        """
        sol = self.affine()
        if sol is None:
            return None
        p = self.field.p
        mask = np.zeros(self.size, dtype=bool)
        for n, off in var.offsets.items():
            r, c = var.shapes[n]
            mask[off:off + r * c] = True
        # null-homotopic directions d s + s d
        bounds = []
        for n in var.source.degrees:
            r, c = var.target.dim(n - 1), var.source.dim(n)
            for idx in range(r * c):
                M = np.zeros(r * c, dtype=np.int64)
                M[idx] = 1
                s = Homotopy(var.source, var.target, {n: M.reshape(r, c)})
                bounds.append(self._flatten(var, homotopy_boundary(s))[mask])
        span = np.array(bounds, dtype=np.int64).reshape(-1, int(mask.sum()))
        base = rank(span, self.field) if span.size else 0
        dirs = []
        for row in sol.nullspace:
            v = row[mask] % p
            if not v.any():
                continue
            trial = np.vstack([span, v[None, :]]) if span.size else v[None, :]
            if rank(trial, self.field) > base:
                span, base = trial, base + 1
                full = np.zeros(self.size, dtype=np.int64)
                full[mask] = v
                dirs.append(Solution(self, full)[var])
        return Solution(self, sol.particular)[var], dirs
