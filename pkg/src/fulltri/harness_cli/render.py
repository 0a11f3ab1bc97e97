"""Balmer-grid renderings of R_n shapes and n-triangles, as DOT or plain text."""

from __future__ import annotations

from fulltri.homotopy_model.complexes import shift
from fulltri.ntriangle import NTriangle
from fulltri.simplex_geometry import RectifiedShape, balmer_layout, build_rectified_shape


def _dims_label(C) -> str:
    if C.is_zero():
        return "0"
    return ",".join(f"{n}:{k}" for n, k in C.dims.items())


def _node(v) -> str:
    return f"a{v[0]}{v[1]}"


def render_balmer(obj: NTriangle | RectifiedShape | int, format: str = "text") -> str:
    """Render the Balmer diagram of ``R_n`` (or of an n-triangle on it).

    Rows are ``i``, columns ``j``; the repeated column holds the shifted
    copies ``a_{0,j}[1]`` that the wrap-around (wavy) edges land on.
    """
    if isinstance(obj, NTriangle):
        n, T = obj.n, obj
    elif isinstance(obj, RectifiedShape):
        n, T = obj.n, None
    else:
        n, T = int(obj), None
        build_rectified_shape(n)
    if format == "dot":
        return _dot(n, T)
    if format == "text":
        return _text(n, T)
    raise ValueError(f"unknown format {format!r} (expected 'dot' or 'text')")


def _dot(n: int, T: NTriangle | None) -> str:
    lay = balmer_layout(n)
    out = [f"digraph R{n} {{", "  node [shape=box];"]
    for v, (r, c) in sorted(lay.cells.items()):
        label = _node(v) if T is None else f"{_node(v)}\\n{_dims_label(T.objects[v])}"
        out.append(f'  {_node(v)} [label="{label}", pos="{c},{-r}!"];')
    for kind, s, t, e in lay.segments():
        name = f"e{e[0]}{e[1]}{e[2]}"
        if kind == "wrap":
            out.append(f'  {_node(s)} -> {_node(t)} [label="{name} [1]", style=dashed, '
                       f'arrowhead=vee, constraint=false];')
        else:
            out.append(f'  {_node(s)} -> {_node(t)} [label="{name}"];')
    out.append("}")
    return "\n".join(out) + "\n"


def _text(n: int, T: NTriangle | None) -> str:
    lay = balmer_layout(n)
    width = 4 if T is None else max(4, *(len(_node(v)) + len(_dims_label(C)) + 3 for v, C in T.objects.items()))

    def cell(v, shifted=False):
        s = _node(v) + ("[1]" if shifted else "")
        if T is not None:
            C = T.objects[v]
            s += f"({_dims_label(shift(C, 1) if shifted else C)})"
        return s.ljust(width + 3)

    lines = []
    rows = max(1, n)
    for i in range(rows):
        parts = []
        for j in range(1, n + 1):
            parts.append(cell((i, j)) if (i, j) in lay.cells else "".ljust(width + 3))
        if (0, i) in lay.repeats and i > 0:
            parts.append(cell((0, i), shifted=True))
        lines.append(" ".join(parts).rstrip())
    wraps = [f"  e{e[0]}{e[1]}{e[2]}: {_node(s)} ~> {_node(t)}[1]"
             for kind, s, t, e in lay.segments() if kind == "wrap"]
    if wraps:
        lines.append("wavy:")
        lines.extend(wraps)
    return "\n".join(lines) + "\n"
