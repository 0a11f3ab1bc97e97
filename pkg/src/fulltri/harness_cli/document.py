"""A versioned, line-oriented text format for complexes, maps and diagrams.

See ``docs/document-format.md`` for the grammar.  A short example::

    fulltri-diagram 1
    field 2
    complex X
      dim 0 1
    end
    map f : X -> X
      deg 0 1
    end
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from fulltri.exact_linalg import PrimeField
from fulltri.homotopy_model.complexes import (
    ChainComplex, ChainMap, ComplexError, chain_map_defect, shift, validate_complex,
)
from fulltri.ntriangle import DiagramError, NTriangle, TriangleMap

FORMAT_VERSION = 1
MAGIC = "fulltri-diagram"

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_.']*$")
_REF = re.compile(r"([A-Za-z_][A-Za-z0-9_.']*)(?:\[(-?\d+)\])?$")


class ParseError(ValueError):
    def __init__(self, line: int, token: str, message: str):
        super().__init__(f"line {line}, at {token!r}: {message}")
        self.line = line
        self.token = token
        self.message = message


@dataclass(frozen=True)
class Ref:
    """A named complex, possibly shifted: ``X`` or ``X[1]``."""

    name: str
    shift: int = 0

    def __str__(self):
        return self.name if not self.shift else f"{self.name}[{self.shift}]"


@dataclass
class MapEntry:
    source: Ref
    target: Ref
    map: ChainMap


@dataclass
class DiagramEntry:
    n: int
    vertices: dict      # (i, j) -> Ref
    edges: dict         # (i, j, k) -> map name


@dataclass
class TriMapEntry:
    source: str
    target: str
    comps: dict         # (i, j) -> map name


@dataclass
class DiagramDocument:
    p: int = 2
    version: int = FORMAT_VERSION
    meta: dict = field(default_factory=dict)
    complexes: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    diagrams: dict = field(default_factory=dict)
    trimaps: dict = field(default_factory=dict)

    @property
    def field(self) -> PrimeField:
        return PrimeField(self.p)

    # -- resolution

    def complex(self, ref: Ref | str) -> ChainComplex:
        if isinstance(ref, str):
            ref = parse_ref(ref)
        C = self.complexes[ref.name]
        return shift(C, ref.shift) if ref.shift else C

    def chain_map(self, name: str) -> ChainMap:
        return self.maps[name].map

    def triangle(self, name: str) -> NTriangle:
        D = self.diagrams[name]
        return NTriangle(D.n, {v: self.complex(r) for v, r in D.vertices.items()},
                         {e: self.chain_map(m) for e, m in D.edges.items()})

    def triangle_map(self, name: str) -> TriangleMap:
        E = self.trimaps[name]
        return TriangleMap(self.triangle(E.source), self.triangle(E.target),
                           {v: self.chain_map(m) for v, m in E.comps.items()})

    # -- building

    def _fresh(self, table: dict, stem: str) -> str:
        if stem not in table:
            return stem
        k = 1
        while f"{stem}_{k}" in table:
            k += 1
        return f"{stem}_{k}"

    def add_complex(self, C: ChainComplex, stem: str = "C") -> Ref:
        """Register ``C`` (reusing an equal complex or a shift of one) and return its reference."""
        self._check_field(C.field)
        for name, X in self.complexes.items():
            if X == C:
                return Ref(name)
        for name, X in self.complexes.items():
            for s in (1, -1, 2, -2):
                if shift(X, s) == C:
                    return Ref(name, s)
        name = self._fresh(self.complexes, stem)
        self.complexes[name] = C
        return Ref(name)

    def add_map(self, f: ChainMap, stem: str = "f") -> str:
        for name, E in self.maps.items():
            if E.map == f:
                return name
        src = self.add_complex(f.source, stem + "_src")
        tgt = self.add_complex(f.target, stem + "_tgt")
        name = self._fresh(self.maps, stem)
        self.maps[name] = MapEntry(src, tgt, f)
        return name

    def add_triangle(self, T: NTriangle, name: str = "T") -> str:
        name = self._fresh(self.diagrams, name)
        verts = {v: self.add_complex(T.objects[v], f"{name}_a{v[0]}{v[1]}") for v in sorted(T.objects)}
        edges = {e: self.add_map(T.edgemaps[e], f"{name}_e{e[0]}{e[1]}{e[2]}") for e in sorted(T.edgemaps)}
        self.diagrams[name] = DiagramEntry(T.n, verts, edges)
        return name

    def add_triangle_map(self, G: TriangleMap, name: str = "G") -> str:
        name = self._fresh(self.trimaps, name)
        s = self.add_triangle(G.source, name + "_S")
        t = self.add_triangle(G.target, name + "_T")
        comps = {v: self.add_map(G.comps[v], f"{name}_{v[0]}{v[1]}") for v in sorted(G.comps)}
        self.trimaps[name] = TriMapEntry(s, t, comps)
        return name

    def _check_field(self, fld: PrimeField):
        if fld.p != self.p:
            raise ValueError(f"document is over GF({self.p}), got GF({fld.p})")


def parse_ref(text: str) -> Ref:
    m = _REF.match(text)
    if not m:
        raise ValueError(f"bad complex reference {text!r}")
    return Ref(m.group(1), int(m.group(2) or 0))


# ------------------------------------------------------------------ serialize

def _matrix_text(M: np.ndarray) -> str:
    return " ; ".join(" ".join(str(int(x)) for x in row) for row in M)


def serialize_document(doc: DiagramDocument) -> str:
    out = [f"{MAGIC} {doc.version}", f"field {doc.p}"]
    for k, v in doc.meta.items():
        out.append(f"meta {k} {v}")
    for name, C in doc.complexes.items():
        out.append(f"complex {name}")
        for n, k in C.dims.items():
            out.append(f"  dim {n} {k}")
        for n in sorted(C.diffs):
            M = C.diffs[n]
            if M.size and M.any():
                out.append(f"  d {n} {_matrix_text(M)}")
        out.append("end")
    for name, E in doc.maps.items():
        out.append(f"map {name} : {E.source} -> {E.target}")
        for n in sorted(E.map.comps):
            M = E.map.comps[n]
            if M.size and M.any():
                out.append(f"  deg {n} {_matrix_text(M)}")
        out.append("end")
    for name, D in doc.diagrams.items():
        out.append(f"triangle {name} {D.n}")
        for (i, j), r in D.vertices.items():
            out.append(f"  vertex {i} {j} {r}")
        for (i, j, k), m in D.edges.items():
            out.append(f"  edge {i} {j} {k} {m}")
        out.append("end")
    for name, E in doc.trimaps.items():
        out.append(f"trimap {name} : {E.source} -> {E.target}")
        for (i, j), m in E.comps.items():
            out.append(f"  at {i} {j} {m}")
        out.append("end")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------- parse

class _Lines:
    def __init__(self, text: str):
        self.items = []
        for no, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if line:
                self.items.append((no, line))
        self.pos = 0

    def next(self):
        if self.pos >= len(self.items):
            return None
        item = self.items[self.pos]
        self.pos += 1
        return item

    def last_line(self) -> int:
        return self.items[-1][0] if self.items else 1


def _int(tok: str, no: int, what: str = "integer") -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(no, tok, f"expected {what}") from None


def _name(tok: str, no: int) -> str:
    if not _NAME.match(tok):
        raise ParseError(no, tok, "expected a name")
    return tok


def _ref(tok: str, no: int) -> Ref:
    try:
        return parse_ref(tok)
    except ValueError:
        raise ParseError(no, tok, "expected a complex reference like X or X[1]") from None


def _matrix(text: str, rows: int, cols: int, no: int) -> np.ndarray:
    body = [r.split() for r in text.split(";")]
    if rows == 0 or cols == 0:
        raise ParseError(no, text, f"matrix of shape {rows}x{cols} must be omitted")
    if len(body) != rows or any(len(r) != cols for r in body):
        got = f"{len(body)}x{max(len(r) for r in body) if body else 0}"
        raise ParseError(no, text, f"expected a {rows}x{cols} matrix, got {got}")
    return np.array([[_int(t, no, "matrix entry") for t in r] for r in body], dtype=np.int64)


def _block(lines: _Lines, head_no: int, head: str):
    body = []
    while True:
        item = lines.next()
        if item is None:
            raise ParseError(lines.last_line(), head, "block is never closed with 'end'")
        no, line = item
        if line == "end":
            return body
        body.append((no, line))


def parse_document(text: str) -> DiagramDocument:
    lines = _Lines(text)
    first = lines.next()
    if first is None:
        raise ParseError(1, "", f"empty input; expected '{MAGIC} {FORMAT_VERSION}'")
    no, line = first
    toks = line.split()
    if toks[0] != MAGIC or len(toks) != 2:
        raise ParseError(no, toks[0], f"expected header '{MAGIC} <version>'")
    version = _int(toks[1], no, "format version")
    if version != FORMAT_VERSION:
        raise ParseError(no, toks[1], f"unsupported format version (this reader knows {FORMAT_VERSION})")
    doc = DiagramDocument(version=version)
    seen_field = False
    while (item := lines.next()) is not None:
        no, line = item
        toks = line.split()
        kw = toks[0]
        if kw == "field":
            if seen_field or doc.complexes:
                raise ParseError(no, kw, "field must be declared once, before any complex")
            if len(toks) != 2:
                raise ParseError(no, line, "expected 'field <p>'")
            doc.p = _int(toks[1], no, "prime modulus")
            try:
                PrimeField(doc.p)
            except ValueError as exc:
                raise ParseError(no, toks[1], str(exc)) from None
            seen_field = True
        elif kw == "meta":
            if len(toks) < 2:
                raise ParseError(no, line, "expected 'meta <key> <value>'")
            doc.meta[toks[1]] = line.split(None, 2)[2] if len(toks) > 2 else ""
        elif kw == "complex":
            _parse_complex(doc, lines, no, toks)
        elif kw == "map":
            _parse_map(doc, lines, no, toks, line)
        elif kw == "triangle":
            _parse_triangle(doc, lines, no, toks)
        elif kw == "trimap":
            _parse_trimap(doc, lines, no, toks, line)
        else:
            raise ParseError(no, kw, "unknown keyword")
    return doc


def _parse_complex(doc, lines, no, toks):
    if len(toks) != 2:
        raise ParseError(no, " ".join(toks), "expected 'complex <name>'")
    name = _name(toks[1], no)
    if name in doc.complexes:
        raise ParseError(no, name, "complex declared twice")
    dims, raw = {}, []
    for bno, bline in _block(lines, no, name):
        bt = bline.split(None, 2)
        if bt[0] == "dim" and len(bt) == 3:
            n, k = _int(bt[1], bno, "degree"), _int(bt[2], bno, "dimension")
            if k < 0:
                raise ParseError(bno, bt[2], "negative dimension")
            dims[n] = k
        elif bt[0] == "d" and len(bt) == 3:
            raw.append((bno, _int(bt[1], bno, "degree"), bt[2]))
        else:
            raise ParseError(bno, bt[0], "expected 'dim <deg> <k>' or 'd <deg> <matrix>'")
    diffs = {n: _matrix(t, dims.get(n + 1, 0), dims.get(n, 0), bno) for bno, n, t in raw}
    C = ChainComplex(doc.field, dims, diffs)
    bad = validate_complex(C)
    if bad is not None:
        raise ParseError(no, name, f"not a complex: {bad}")
    doc.complexes[name] = C


def _resolve(doc, ref: Ref, no: int) -> ChainComplex:
    if ref.name not in doc.complexes:
        raise ParseError(no, str(ref), "unknown complex")
    return doc.complex(ref)


def _parse_map(doc, lines, no, toks, line):
    if len(toks) != 6 or toks[2] != ":" or toks[4] != "->":
        raise ParseError(no, line, "expected 'map <name> : <source> -> <target>'")
    name = _name(toks[1], no)
    if name in doc.maps:
        raise ParseError(no, name, "map declared twice")
    src, tgt = _ref(toks[3], no), _ref(toks[5], no)
    S, T = _resolve(doc, src, no), _resolve(doc, tgt, no)
    comps = {}
    for bno, bline in _block(lines, no, name):
        bt = bline.split(None, 2)
        if bt[0] != "deg" or len(bt) != 3:
            raise ParseError(bno, bt[0], "expected 'deg <n> <matrix>'")
        n = _int(bt[1], bno, "degree")
        comps[n] = _matrix(bt[2], T.dim(n), S.dim(n), bno)
    f = ChainMap(S, T, comps)
    bad = chain_map_defect(f)
    if bad is not None:
        raise ParseError(no, name, f"not a chain map: {bad}")
    doc.maps[name] = MapEntry(src, tgt, f)


def _parse_triangle(doc, lines, no, toks):
    if len(toks) != 3:
        raise ParseError(no, " ".join(toks), "expected 'triangle <name> <n>'")
    name = _name(toks[1], no)
    n = _int(toks[2], no, "dimension")
    verts, edges = {}, {}
    for bno, bline in _block(lines, no, name):
        bt = bline.split()
        if bt[0] == "vertex" and len(bt) == 4:
            ref = _ref(bt[3], bno)
            _resolve(doc, ref, bno)
            verts[(_int(bt[1], bno), _int(bt[2], bno))] = ref
        elif bt[0] == "edge" and len(bt) == 5:
            if bt[4] not in doc.maps:
                raise ParseError(bno, bt[4], "unknown map")
            edges[(_int(bt[1], bno), _int(bt[2], bno), _int(bt[3], bno))] = bt[4]
        else:
            raise ParseError(bno, bt[0], "expected 'vertex <i> <j> <ref>' or 'edge <i> <j> <k> <map>'")
    doc.diagrams[name] = DiagramEntry(n, verts, edges)
    try:
        doc.triangle(name)
    except (DiagramError, ValueError, ComplexError) as exc:
        del doc.diagrams[name]
        raise ParseError(no, name, str(exc)) from None


def _parse_trimap(doc, lines, no, toks, line):
    if len(toks) != 6 or toks[2] != ":" or toks[4] != "->":
        raise ParseError(no, line, "expected 'trimap <name> : <triangle> -> <triangle>'")
    name = _name(toks[1], no)
    for t in (toks[3], toks[5]):
        if t not in doc.diagrams:
            raise ParseError(no, t, "unknown triangle")
    comps = {}
    for bno, bline in _block(lines, no, name):
        bt = bline.split()
        if bt[0] != "at" or len(bt) != 4:
            raise ParseError(bno, bt[0], "expected 'at <i> <j> <map>'")
        if bt[3] not in doc.maps:
            raise ParseError(bno, bt[3], "unknown map")
        comps[(_int(bt[1], bno), _int(bt[2], bno))] = bt[3]
    doc.trimaps[name] = TriMapEntry(toks[3], toks[5], comps)
    try:
        doc.triangle_map(name)
    except (DiagramError, ValueError) as exc:
        del doc.trimaps[name]
        raise ParseError(no, name, str(exc)) from None
