"""Bounded cochain complexes over GF(p), chain maps and homotopies.

Grading is cohomological: ``d^n : C^n -> C^{n+1}``.  Conventions used
everywhere in the package:

* ``C[k]^n = C^{n+k}`` with differential ``(-1)^k d``; maps shift without sign.
* ``cone(u: X -> Y)^n = X^{n+1} (+) Y^n`` with differential ``[[-d_X, 0], [u, d_Y]]``.
* a homotopy ``h`` from ``S`` to ``T`` has components ``h^n : S^n -> T^{n-1}``
  and ``(dh + hd)^n = d_T^{n-1} h^n + h^{n+1} d_S^n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from fulltri.exact_linalg import GF2, PrimeField, block, diag, rank


def _freeze(matrices: Mapping[int, np.ndarray], p: int) -> dict[int, np.ndarray]:
    out = {}
    for n, M in matrices.items():
        M = np.mod(np.asarray(M, dtype=np.int64), p)
        M.setflags(write=False)
        out[int(n)] = M
    return out


class ComplexError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ChainComplex:
    field: PrimeField
    dims: Mapping[int, int]
    diffs: Mapping[int, np.ndarray] = dc_field(default_factory=dict)

    def __post_init__(self):
        dims = {int(n): int(k) for n, k in self.dims.items() if int(k) != 0}
        if any(k < 0 for k in dims.values()):
            raise ComplexError("negative dimension")
        diffs = {}
        for n, M in self.diffs.items():
            M = np.asarray(M, dtype=np.int64)
            shape = (dims.get(n + 1, 0), dims.get(n, 0))
            if M.size == 0 and 0 in shape:
                continue
            if M.shape != shape:
                raise ComplexError(f"differential d^{n} has shape {M.shape}, expected {shape}")
            diffs[n] = M
        object.__setattr__(self, "dims", dict(sorted(dims.items())))
        object.__setattr__(self, "diffs", _freeze(diffs, self.field.p))

    @property
    def p(self) -> int:
        return self.field.p

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def d(self, n: int) -> np.ndarray:
        M = self.diffs.get(n)
        if M is None:
            return np.zeros((self.dim(n + 1), self.dim(n)), dtype=np.int64)
        return M

    @property
    def degrees(self) -> list[int]:
        return list(self.dims)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return not self.dims

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, ChainComplex):
            return NotImplemented
        if self.p != other.p or self.dims != other.dims:
            return False
        keys = set(self.diffs) | set(other.diffs)
        return all(np.array_equal(self.d(n), other.d(n)) for n in keys)

    __hash__ = None

    def __repr__(self):
        return f"ChainComplex(p={self.p}, dims={self.dims})"


def _degree_union(*cxs: ChainComplex, offsets: Iterable[int] = ()) -> list[int]:
    degs: set[int] = set()
    for C in cxs:
        degs.update(C.dims)
    for o in offsets:
        degs.update(n - o for C in cxs for n in C.dims)
    return sorted(degs)


class _Graded:
    """Shared behaviour of degree-graded linear maps between complexes."""

    degree = 0

    def comp(self, n: int) -> np.ndarray:
        M = self.comps.get(n)
        if M is None:
            return np.zeros((self.target.dim(n + self.degree), self.source.dim(n)), dtype=np.int64)
        return M

    @property
    def field(self) -> PrimeField:
        return self.source.field

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            return False
        keys = set(self.comps) | set(other.comps)
        return all(np.array_equal(self.comp(n), other.comp(n)) for n in keys)

    __hash__ = None

    def is_zero(self) -> bool:
        return all(not M.any() for M in self.comps.values())

    def _init(self):
        if self.source.p != self.target.p:
            raise ComplexError("source and target live over different fields")
        comps = {}
        for n, M in self.comps.items():
            M = np.asarray(M, dtype=np.int64)
            shape = (self.target.dim(n + self.degree), self.source.dim(n))
            if 0 in shape:
                if M.size:
                    raise ComplexError(f"component {n} has shape {M.shape}, expected {shape}")
                continue
            if M.shape != shape:
                raise ComplexError(f"component {n} has shape {M.shape}, expected {shape}")
            comps[int(n)] = M
        object.__setattr__(self, "comps", _freeze(comps, self.source.p))


@dataclass(frozen=True, eq=False)
class ChainMap(_Graded):
    source: ChainComplex
    target: ChainComplex
    comps: Mapping[int, np.ndarray] = dc_field(default_factory=dict)

    degree = 0

    def __post_init__(self):
        self._init()

    def __repr__(self):
        return f"ChainMap({self.source.dims} -> {self.target.dims})"

    def __add__(self, other: "ChainMap") -> "ChainMap":
        return add(self, other)

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        return add(self, negate(other))

    def __neg__(self) -> "ChainMap":
        return negate(self)

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        # (g @ f) is "g after f"
        return compose(self, other)


@dataclass(frozen=True, eq=False)
class Homotopy(_Graded):
    source: ChainComplex
    target: ChainComplex
    comps: Mapping[int, np.ndarray] = dc_field(default_factory=dict)

    degree = -1

    def __post_init__(self):
        self._init()

    def __repr__(self):
        return f"Homotopy({self.source.dims} -> {self.target.dims})"


# ---------------------------------------------------------------- builders

def zero_complex(field: PrimeField = GF2) -> ChainComplex:
    return ChainComplex(field, {})


def complex_from(field: PrimeField, dims: Mapping[int, int], diffs: Mapping[int, object] | None = None) -> ChainComplex:
    return ChainComplex(field, dict(dims), {n: np.asarray(M, dtype=np.int64) for n, M in (diffs or {}).items()})


def identity(C: ChainComplex) -> ChainMap:
    return ChainMap(C, C, {n: np.eye(k, dtype=np.int64) for n, k in C.dims.items()})


def zero_map(S: ChainComplex, T: ChainComplex) -> ChainMap:
    return ChainMap(S, T, {})


def zero_homotopy(S: ChainComplex, T: ChainComplex) -> Homotopy:
    return Homotopy(S, T, {})


def scale(f, c: int):
    p = f.field.p
    return type(f)(f.source, f.target, {n: (c * M) % p for n, M in f.comps.items()})


def negate(f):
    return scale(f, -1)


def add(f, g):
    if type(f) is not type(g):
        raise ComplexError("cannot add maps of different degrees")
    if f.source != g.source or f.target != g.target:
        raise ComplexError("cannot add maps with different source/target")
    p = f.field.p
    keys = set(f.comps) | set(g.comps)
    return type(f)(f.source, f.target, {n: (f.comp(n) + g.comp(n)) % p for n in keys})


def compose(g, f):
    """``g`` after ``f``.  At most one of them may be a homotopy."""
    if f.target != g.source:
        raise ComplexError("maps are not composable")
    deg = f.degree + g.degree
    if deg not in (0, -1):
        raise ComplexError("composite of two homotopies is not supported")
    fld = f.field
    comps = {}
    for n in f.comps:
        A = g.comps.get(n + f.degree)
        if A is None:
            continue
        comps[n] = fld.matmul(A, f.comps[n])
    cls = ChainMap if deg == 0 else Homotopy
    return cls(f.source, g.target, comps)


def compose_all(*maps):
    """``compose_all(h, g, f) = h after g after f``."""
    out = maps[-1]
    for m in reversed(maps[:-1]):
        out = compose(m, out)
    return out


# ----------------------------------------------------------------- validity

@dataclass
class Violation:
    degree: int
    message: str

    def __str__(self):
        return f"degree {self.degree}: {self.message}"


def validate_complex(C: ChainComplex) -> Violation | None:
    """``None`` when ``d o d = 0``; otherwise the first failing degree."""
    for n in C.degrees:
        if C.dim(n + 1) == 0:
            continue
        dd = C.field.matmul(C.d(n + 1), C.d(n))
        if dd.any():
            return Violation(n + 1, f"d^{n + 1} d^{n} != 0")
    return None


def chain_map_defect(f: ChainMap) -> Violation | None:
    fld = f.field
    for n in _degree_union(f.source, f.target, offsets=(1,)):
        lhs = fld.matmul(f.target.d(n), f.comp(n))
        rhs = fld.matmul(f.comp(n + 1), f.source.d(n))
        if not np.array_equal(lhs, rhs):
            return Violation(n, "d f != f d")
    return None


def is_chain_map(f: ChainMap) -> bool:
    return chain_map_defect(f) is None


def homotopy_boundary(h: Homotopy) -> ChainMap:
    """The chain map ``d h + h d``."""
    fld = h.field
    S, T = h.source, h.target
    comps = {}
    for n in S.degrees:
        M = np.zeros((T.dim(n), S.dim(n)), dtype=np.int64)
        if T.dim(n - 1):
            M = M + fld.matmul(T.d(n - 1), h.comp(n))
        if S.dim(n + 1):
            M = M + fld.matmul(h.comp(n + 1), S.d(n))
        comps[n] = M % fld.p
    return ChainMap(S, T, comps)


def witnesses_homotopy(h: Homotopy, f: ChainMap, g: ChainMap) -> bool:
    """Pure arithmetic re-check of ``d h + h d = f - g``."""
    return homotopy_boundary(h) == add(f, negate(g))


# -------------------------------------------------------------------- shift

def shift(x, k: int = 1):
    """Shift a complex, chain map or homotopy by ``k``."""
    if isinstance(x, ChainComplex):
        sign = -1 if k % 2 else 1
        return ChainComplex(x.field, {n - k: m for n, m in x.dims.items()},
                            {n - k: sign * M for n, M in x.diffs.items()})
    if isinstance(x, ChainMap):
        return ChainMap(shift(x.source, k), shift(x.target, k), {n - k: M for n, M in x.comps.items()})
    if isinstance(x, Homotopy):
        sign = -1 if k % 2 else 1
        return Homotopy(shift(x.source, k), shift(x.target, k),
                        {n - k: sign * M for n, M in x.comps.items()})
    raise TypeError(f"cannot shift {type(x).__name__}")


# -------------------------------------------------------------- direct sums

def direct_sum(*objs):
    """Direct sum of complexes, or blockwise-diagonal sum of maps."""
    if not objs:
        raise ValueError("empty direct sum")
    if isinstance(objs[0], ChainComplex):
        fld = objs[0].field
        degs = _degree_union(*objs)
        dims = {n: sum(C.dim(n) for C in objs) for n in degs}
        diffs = {n: diag([C.d(n) for C in objs], fld) for n in degs}
        return ChainComplex(fld, dims, diffs)
    cls = type(objs[0])
    S = direct_sum(*(f.source for f in objs))
    T = direct_sum(*(f.target for f in objs))
    degs = _degree_union(*(f.source for f in objs))
    return cls(S, T, {n: diag([f.comp(n) for f in objs], S.field) for n in degs})


def inclusion(summands: list[ChainComplex], i: int) -> ChainMap:
    total = direct_sum(*summands)
    comps = {}
    for n in total.degrees:
        cols = summands[i].dim(n)
        off = sum(C.dim(n) for C in summands[:i])
        M = np.zeros((total.dim(n), cols), dtype=np.int64)
        M[off:off + cols, :] = np.eye(cols, dtype=np.int64)
        comps[n] = M
    return ChainMap(summands[i], total, comps)


def projection(summands: list[ChainComplex], i: int) -> ChainMap:
    total = direct_sum(*summands)
    comps = {}
    for n in total.degrees:
        rows = summands[i].dim(n)
        off = sum(C.dim(n) for C in summands[:i])
        M = np.zeros((rows, total.dim(n)), dtype=np.int64)
        M[:, off:off + rows] = np.eye(rows, dtype=np.int64)
        comps[n] = M
    return ChainMap(total, summands[i], comps)


def block_map(rows: list[ChainComplex], cols: list[ChainComplex], grid) -> ChainMap:
    """Chain map ``(+)cols -> (+)rows`` from a grid of maps / 0 / +-1 scalars.

    ``grid[i][j]`` maps ``cols[j] -> rows[i]``; an integer ``c`` means ``c``
    times the identity (requires ``rows[i] == cols[j]``).
    """
    S = direct_sum(*cols)
    T = direct_sum(*rows)
    fld = S.field
    comps = {}
    for n in _degree_union(S, T):
        g = []
        for i, R in enumerate(rows):
            line = []
            for j, C in enumerate(cols):
                e = grid[i][j]
                if isinstance(e, ChainMap):
                    if e.source != C or e.target != R:
                        raise ComplexError(f"block ({i}, {j}) has the wrong source/target")
                    line.append(e.comp(n))
                elif e is None or (isinstance(e, (int, np.integer)) and e == 0):
                    line.append(np.zeros((R.dim(n), C.dim(n)), dtype=np.int64))
                else:
                    if R != C:
                        raise ComplexError(f"scalar block ({i}, {j}) needs equal source and target")
                    line.append(int(e) * np.eye(R.dim(n), dtype=np.int64))
            g.append(line)
        comps[n] = block(g, fld, row_sizes=[R.dim(n) for R in rows], col_sizes=[C.dim(n) for C in cols])
    return ChainMap(S, T, comps)


# ------------------------------------------------------- graded block maps

Part = tuple  # (complex C, offset o): the graded piece n -> C^{n+o}


def cone_parts(u: ChainMap) -> list[Part]:
    return [(u.source, 1), (u.target, 0)]


def sum_parts(*cxs: ChainComplex) -> list[Part]:
    return [(C, 0) for C in cxs]


def shift_parts(parts: list[Part], k: int = 1) -> list[Part]:
    return [(C, o + k) for C, o in parts]


def _part_dims(parts: list[Part], n: int) -> list[int]:
    return [C.dim(n + o) for C, o in parts]


def graded_block(source: ChainComplex, target: ChainComplex, src_parts: list[Part],
                 tgt_parts: list[Part], grid, check: bool = True) -> ChainMap:
    """Chain map given by a block matrix with respect to graded decompositions.

    ``grid[i][j]`` maps the source piece ``j`` to the target piece ``i`` and is
    ``0``/``None``, an integer ``c`` (``c`` times the identity of equal pieces),
    a chain map, or a homotopy (whose raw components are placed, so a homotopy
    ``k: X -> Y`` between pieces ``(X, 1)`` and ``(Y, 0)`` contributes ``k^{n+1}``).
    """
    fld = source.field
    comps = {}
    for n in _degree_union(source, target):
        rs, cs = _part_dims(tgt_parts, n), _part_dims(src_parts, n)
        if sum(rs) != target.dim(n) or sum(cs) != source.dim(n):
            raise ComplexError(f"graded pieces do not add up in degree {n}")
        g = []
        for i, (B, ob) in enumerate(tgt_parts):
            line = []
            for j, (A, oa) in enumerate(src_parts):
                e = grid[i][j]
                if e is None or (isinstance(e, (int, np.integer)) and e == 0):
                    line.append(np.zeros((rs[i], cs[j]), dtype=np.int64))
                elif isinstance(e, (int, np.integer)):
                    if oa != ob or A != B:
                        raise ComplexError(f"scalar block ({i}, {j}) between different pieces")
                    line.append(int(e) * np.eye(rs[i], dtype=np.int64))
                else:
                    if e.source != A or e.target != B or ob != oa + e.degree:
                        raise ComplexError(f"block ({i}, {j}) does not fit its pieces")
                    line.append(e.comp(n + oa))
            g.append(line)
        comps[n] = block(g, fld, row_sizes=rs, col_sizes=cs)
    out = ChainMap(source, target, comps)
    if check:
        bad = chain_map_defect(out)
        if bad is not None:
            raise ComplexError(f"block matrix is not a chain map ({bad})")
    return out


# ------------------------------------------------------------ mapping cone

class Cone(NamedTuple):
    complex: ChainComplex
    inclusion: ChainMap   # Y -> C(u)
    projection: ChainMap  # C(u) -> X[1]


def mapping_cone(u: ChainMap) -> Cone:
    X, Y = u.source, u.target
    fld = u.field
    X1 = shift(X, 1)
    degs = _degree_union(X1, Y)
    dims = {n: X1.dim(n) + Y.dim(n) for n in degs}
    diffs = {}
    for n in degs:
        diffs[n] = block([[(-X.d(n + 1)) % fld.p, np.zeros((X.dim(n + 2), Y.dim(n)), dtype=np.int64)],
                          [u.comp(n + 1), Y.d(n)]], fld,
                         row_sizes=[X.dim(n + 2), Y.dim(n + 1)], col_sizes=[X.dim(n + 1), Y.dim(n)])
    C = ChainComplex(fld, dims, diffs)
    inc = inclusion([X1, Y], 1)
    proj = projection([X1, Y], 0)
    # rebind so the cone complex carries the twisted differential
    inc = ChainMap(Y, C, dict(inc.comps))
    proj = ChainMap(C, X1, dict(proj.comps))
    return Cone(C, inc, proj)


def cone(u: ChainMap) -> ChainComplex:
    return mapping_cone(u).complex


# --------------------------------------------------------------- exactness

def betti(C: ChainComplex, n: int) -> int:
    fld = C.field
    return C.dim(n) - rank(C.d(n), fld) - rank(C.d(n - 1), fld)


def is_exact(C: ChainComplex) -> bool:
    return all(betti(C, n) == 0 for n in C.degrees)
