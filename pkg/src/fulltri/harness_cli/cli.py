"""The ``fulltri`` command line.

Verbs read DiagramDocument files (``-`` for stdin) and either print a report
or write a new document (stdout unless ``--out``).  Exit codes: 0 clean,
1 a check failed, 2 only undetermined answers, 3 bad input.
"""

from __future__ import annotations

import sys
from functools import wraps

import click

from fulltri.distinguished import (
    DEFAULT_BUDGET, CompletionError, apply_lightning, build_five_triangle, build_standard,
    build_standard_2, check_distinguished, check_distinguished_map, check_sum_theorem,
    complete_3x3, is_good, lightning_difference, neeman_N, neeman_Ndoubleprime, neeman_Nprime,
    verify_3x3,
)
from fulltri.exact_linalg import PrimeField
from fulltri.harness_cli.document import DiagramDocument, ParseError, parse_document, serialize_document
from fulltri.harness_cli.generators import random_3x3_instance, random_base
from fulltri.harness_cli.render import render_balmer
from fulltri.harness_cli.suite import axiom_suite, check_names
from fulltri.homotopy_model.complexes import ComplexError
from fulltri.ntriangle import (
    HOMOTOPY, STRICT, DiagramError, degenerate as degenerate_triangle, face_pi, rotate_sigma,
    rotate_tau_power, verify_diagram, verify_map,
)
from fulltri.simplex_geometry import counts as shape_counts, enumerated_counts, item3_report

EXIT_OK, EXIT_FAIL, EXIT_UNDETERMINED, EXIT_INPUT = 0, 1, 2, 3


class InputError(click.ClickException):
    exit_code = EXIT_INPUT


def _exit(code: int):
    raise SystemExit(code)


def guarded(fn):
    """Turn malformed input into exit status 3 with a one-line message."""
    @wraps(fn)
    def run(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ParseError, ComplexError, DiagramError, KeyError, ValueError) as exc:
            msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
            raise InputError(f"{type(exc).__name__}: {msg}") from exc
    return run


def _field(p: int | None) -> PrimeField:
    try:
        return PrimeField(p or 2)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _load(path: str, p: int | None = None) -> DiagramDocument:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    doc = parse_document(text)
    if p is not None and p != doc.p:
        raise InputError(f"--field {p} does not match the document field {doc.p}")
    return doc


def _pick(table: dict, name: str | None, what: str) -> str:
    if name is not None:
        if name not in table:
            raise InputError(f"no {what} named {name!r}")
        return name
    if len(table) != 1:
        raise InputError(f"document has {len(table)} {what}s; name one")
    return next(iter(table))


def _emit(doc: DiagramDocument, out: str | None):
    text = serialize_document(doc)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _verdict_line(label: str, v) -> str:
    return f"{label}: {v.status}" + (f" ({v.reason})" if v.reason else "")


def _status_code(verdicts) -> int:
    verdicts = list(verdicts)
    if any(v.no for v in verdicts):
        return EXIT_FAIL
    if any(v.undetermined for v in verdicts):
        return EXIT_UNDETERMINED
    return EXIT_OK


field_opt = click.option("--field", "p", type=int, default=None, help="Field modulus p (default 2).")
budget_opt = click.option("--budget", type=int, default=DEFAULT_BUDGET, show_default=True,
                          help="Search budget for certified deciders.")
seed_opt = click.option("--seed", type=int, default=0, show_default=True)
out_opt = click.option("--out", "-o", type=click.Path(dir_okay=False), default=None,
                       help="Write the resulting document here instead of stdout.")
doc_arg = click.argument("document", type=click.Path(allow_dash=True))


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="artifact")
def main():
    """Check n-triangles and their maps in the homotopy category of complexes over GF(p)."""


# ------------------------------------------------------------ inspection

@main.command()
@doc_arg
@click.option("--name", default=None, help="Triangle or triangle map to verify (default: all).")
@click.option("--mode", type=click.Choice([STRICT, HOMOTOPY]), default=HOMOTOPY, show_default=True)
@field_opt
@guarded
def verify(document, name, mode, p):
    """Check that diagrams commute and maps are natural."""
    doc = _load(document, p)
    names = [name] if name else list(doc.diagrams) + list(doc.trimaps)
    ok = True
    for nm in names:
        if nm in doc.diagrams:
            rep = verify_diagram(doc.triangle(nm), mode)
            click.echo(f"triangle {nm}: {rep.summary()}")
        elif nm in doc.trimaps:
            rep = verify_map(doc.triangle_map(nm), mode)
            bad = sum(e.status == "fails" for e in rep.entries)
            click.echo(f"map {nm}: {'pass' if rep.ok else 'FAIL'}: {len(rep.entries)} squares, {bad} failing")
        else:
            raise InputError(f"no triangle or map named {nm!r}")
        ok &= rep.ok
    click.echo(f"complexes: {len(doc.complexes)} valid")
    _exit(EXIT_OK if ok else EXIT_FAIL)


@main.command()
@click.argument("n", type=int)
def counts(n):
    """Vertex, edge and facet counts of the rectified n-simplex."""
    if n < 1:
        raise InputError("n must be at least 1")
    c, e = shape_counts(n), enumerated_counts(n)
    for label, a, b in (("vertices", c.vertices, e.vertices), ("edges", c.edges, e.edges),
                        ("simplex facets", c.simplex_facets, e.simplex_facets),
                        ("rectified facets", c.rectified_facets, e.rectified_facets)):
        click.echo(f"{label:17} formula {a:4}  enumerated {b:4}")
    if n >= 2:
        click.echo("i-faces (closed form vs enumerated):")
        for i, formula, seen in item3_report(n):
            flag = "" if formula == seen else "  mismatch"
            click.echo(f"  i={i}: {formula} vs {seen}{flag}")
    _exit(EXIT_FAIL if c != e else EXIT_OK)


@main.command()
@click.argument("source")
@click.option("--name", default=None)
@click.option("--format", "fmt", type=click.Choice(["dot", "text"]), default="text", show_default=True)
@guarded
def render(source, name, fmt):
    """Draw the Balmer diagram of R_n (SOURCE an integer n) or of a triangle in a document."""
    if source.lstrip("-").isdigit():
        n = int(source)
        if n < 1:
            raise InputError("n must be at least 1")
        click.echo(render_balmer(n, fmt), nl=False)
        return
    doc = _load(source)
    click.echo(render_balmer(doc.triangle(_pick(doc.diagrams, name, "triangle")), fmt), nl=False)


# ---------------------------------------------------------- construction

@main.command("build-standard")
@click.argument("document", required=False, type=click.Path(allow_dash=True))
@click.argument("maps", nargs=-1)
@click.option("--random", "rand_n", type=int, default=None, help="Build on a random base of this length n.")
@click.option("--name", default="T")
@field_opt
@seed_opt
@out_opt
@guarded
def build_standard_cmd(document, maps, rand_n, name, p, seed, out):
    """Standard n-triangle on a base of composable maps (named in DOCUMENT, or random)."""
    if rand_n is not None:
        fld = _field(p)
        base = random_base(seed, rand_n, fld)
        doc = DiagramDocument(p=fld.p)
    else:
        if document is None or not maps:
            raise InputError("give a document and the base maps, or --random n")
        doc = _load(document, p)
        base = [doc.chain_map(m) for m in maps]
    T, _ = build_standard(base)
    doc.add_triangle(T, name)
    _emit(doc, out)


@main.command()
@doc_arg
@click.argument("map_name")
@click.option("--name", default="cone")
@out_opt
@guarded
def cone(document, map_name, name, out):
    """The standard 2-triangle X -> Y -> C(u) -> X[1] on a map u."""
    doc = _load(document)
    T, _ = build_standard_2(doc.chain_map(map_name))
    doc.add_triangle(T, name)
    _emit(doc, out)


@main.command("five-tri")
@doc_arg
@click.argument("first")
@click.argument("second")
@click.option("--name", default="F")
@budget_opt
@out_opt
@guarded
def five_tri(document, first, second, name, budget, out):
    """The 5-triangle built from two distinguished 2-triangles."""
    doc = _load(document)
    F, _ = build_five_triangle(doc.triangle(first), doc.triangle(second))
    doc.add_triangle(F, name)
    _emit(doc, out)


@main.command()
@doc_arg
@click.argument("triangle")
@click.option("--sigma", is_flag=True, help="Full rotation sigma instead of tau.")
@click.option("--times", "k", type=int, default=1, show_default=True)
@out_opt
@guarded
def rotate(document, triangle, sigma, k, out):
    """Rotate a triangle by tau^k (or sigma^k)."""
    doc = _load(document)
    T = doc.triangle(triangle)
    R = rotate_sigma(T, k) if sigma else rotate_tau_power(T, k)
    doc.add_triangle(R, f"{triangle}_{'sigma' if sigma else 'tau'}{k}".replace("-", "m"))
    _emit(doc, out)


@main.command()
@doc_arg
@click.argument("triangle")
@click.argument("index", type=int)
@out_opt
@guarded
def face(document, triangle, index, out):
    """The (n-1)-triangle face pi_i of an n-triangle."""
    doc = _load(document)
    doc.add_triangle(face_pi(doc.triangle(triangle), index), f"{triangle}_face{index}")
    _emit(doc, out)


@main.command()
@doc_arg
@click.argument("triangle")
@click.argument("index", type=int)
@out_opt
@guarded
def degenerate(document, triangle, index, out):
    """The degenerate (n+1)-triangle s_i of an n-triangle."""
    doc = _load(document)
    doc.add_triangle(degenerate_triangle(doc.triangle(triangle), index), f"{triangle}_deg{index}")
    _emit(doc, out)


# --------------------------------------------------------------- deciding

@main.command("check-2tri")
@doc_arg
@click.option("--name", default=None)
@budget_opt
@seed_opt
@guarded
def check_2tri(document, name, budget, seed):
    """Is a triangle distinguished?  (n > 2: decided against the standard triangle on its base.)"""
    doc = _load(document)
    nm = _pick(doc.diagrams, name, "triangle")
    v = check_distinguished(doc.triangle(nm), budget, seed)
    click.echo(_verdict_line(nm, v))
    _exit(_status_code([v]))


@main.command("check-map")
@doc_arg
@click.option("--name", default=None)
@guarded
def check_map(document, name):
    """Is a map of triangles distinguished?"""
    doc = _load(document)
    nm = _pick(doc.trimaps, name, "triangle map")
    v = check_distinguished_map(doc.triangle_map(nm))
    click.echo(_verdict_line(nm, v))
    _exit(_status_code([v]))


@main.command("check-good")
@doc_arg
@click.option("--name", default=None)
@budget_opt
@guarded
def check_good(document, name, budget):
    """Is the mapping-cone triangle of a map distinguished?"""
    doc = _load(document)
    nm = _pick(doc.trimaps, name, "triangle map")
    v = is_good(doc.triangle_map(nm), budget)
    click.echo(_verdict_line(f"{nm} good", v))
    _exit(_status_code([v]))


@main.command()
@doc_arg
@click.argument("trimap")
@click.option("--tau", "tau_name", default=None, help="Strike with this map c -> b'.")
@click.option("--against", default=None, help="Find the strike taking TRIMAP to this map.")
@out_opt
@guarded
def lightning(document, trimap, tau_name, against, out):
    """Apply a lightning strike, or find the one relating two maps."""
    doc = _load(document)
    G = doc.triangle_map(trimap)
    if (tau_name is None) == (against is None):
        raise InputError("give exactly one of --tau and --against")
    if tau_name is not None:
        doc.add_triangle_map(apply_lightning(G, doc.chain_map(tau_name)), f"{trimap}_struck")
        _emit(doc, out)
        return
    found = lightning_difference(G, doc.triangle_map(against))
    if found is None:
        click.echo(f"{trimap} -> {against}: no lightning strike")
        _exit(EXIT_FAIL)
    tau, _ = found
    name = doc.add_map(tau, "tau")
    click.echo(f"{trimap} -> {against}: strike by {name}", err=True)
    _emit(doc, out)


@main.command()
@doc_arg
@click.argument("trimap")
@click.option("--variant", type=click.Choice(["N", "N'", "N''", "all"]), default="all", show_default=True)
@out_opt
@guarded
def neeman(document, trimap, variant, out):
    """Neeman's maps N(G), N'(G), N''(G), with verdicts compared to G's."""
    doc = _load(document)
    G = doc.triangle_map(trimap)
    builders = {"N": neeman_N, "N'": neeman_Nprime, "N''": neeman_Ndoubleprime}
    base = check_distinguished_map(G)
    click.echo(_verdict_line(trimap, base), err=True)
    verdicts = [base]
    agree = True
    for key, build in builders.items():
        if variant not in ("all", key):
            continue
        H = build(G)
        v = check_distinguished_map(H)
        verdicts.append(v)
        agree &= v.status == base.status
        click.echo(_verdict_line(f"{key}({trimap})", v), err=True)
        doc.add_triangle_map(H, f"{trimap}_{key.replace(chr(39), 'p')}")
    _emit(doc, out)
    if not agree:
        _exit(EXIT_FAIL)
    _exit(EXIT_UNDETERMINED if any(v.undetermined for v in verdicts) else EXIT_OK)


@main.command("sum")
@doc_arg
@click.argument("first")
@click.argument("second")
@guarded
def sum_cmd(document, first, second):
    """Verdicts on G1, G2 and G1 (+) G2; both distinguished iff the sum is."""
    doc = _load(document)
    try:
        rep = check_sum_theorem(doc.triangle_map(first), doc.triangle_map(second))
    except AssertionError as exc:
        click.echo(f"FAIL: {exc}")
        _exit(EXIT_FAIL)
    click.echo(_verdict_line(first, rep.first))
    click.echo(_verdict_line(second, rep.second))
    click.echo(_verdict_line("sum", rep.total))
    _exit(EXIT_UNDETERMINED if not rep.determined else EXIT_OK)


@main.command("three-by-three")
@click.argument("document", required=False, type=click.Path(allow_dash=True))
@click.option("--rows", nargs=2, default=None, help="Names of the first two rows.")
@click.option("--cols", nargs=2, default=None, help="Names of the first two columns.")
@click.option("--maps", nargs=2, default=None, help="Names of the column map and the row map.")
@click.option("--random", "rand", is_flag=True, help="Use a seeded random instance.")
@click.option("--coupled", is_flag=True, help="Random instance with coupled homotopies.")
@field_opt
@seed_opt
@budget_opt
@out_opt
@guarded
def three_by_three(document, rows, cols, maps, rand, coupled, p, seed, budget, out):
    """Complete two rows, two columns and two maps to a 3x3 diagram."""
    if rand:
        fld = _field(p)
        row1, row2, col1, col2, G_col, G_row = random_3x3_instance(seed, fld, coupled=coupled)
        doc = DiagramDocument(p=fld.p)
    else:
        if document is None or not (rows and cols and maps):
            raise InputError("give a document with --rows, --cols and --maps, or --random")
        doc = _load(document, p)
        row1, row2 = (doc.triangle(r) for r in rows)
        col1, col2 = (doc.triangle(c) for c in cols)
        G_col, G_row = (doc.triangle_map(m) for m in maps)
    try:
        D = complete_3x3(row1, row2, col1, col2, G_col, G_row, seed=seed, budget=budget)
    except CompletionError as exc:
        kind = "certified obstruction" if exc.certified else "budget exhausted"
        click.echo(f"no completion ({kind}): {exc.reason}")
        _exit(EXIT_FAIL if exc.certified else EXIT_UNDETERMINED)
    rep = verify_3x3(D, budget)
    for s in rep["squares"]:
        click.echo(f"square {s.name} ({'+' if s.sign > 0 else '-'}): {'ok' if s.ok else 'FAIL'}", err=True)
    for i, T in enumerate(D.rows, 1):
        doc.add_triangle(T, f"row{i}")
    for i, T in enumerate(D.cols, 1):
        doc.add_triangle(T, f"col{i}")
    _emit(doc, out)
    if not all(s.ok for s in rep["squares"]):
        _exit(EXIT_FAIL)
    _exit(_status_code(rep["rows"] + rep["cols"]))


# ------------------------------------------------------------------ suite

@main.command()
@seed_opt
@click.option("--cases", type=int, default=5, show_default=True)
@click.option("--n-max", type=int, default=3, show_default=True)
@click.option("--only", multiple=True, type=click.Choice(check_names()), help="Run only these checks.")
@click.option("--max-dim", type=int, default=3, show_default=True)
@click.option("--dump-dir", type=click.Path(file_okay=False), default=None,
              help="Write the first failure of each check here.")
@field_opt
def suite(seed, cases, n_max, only, max_dim, dump_dir, p):
    """Seeded randomized checks of the axioms and theorems."""
    fld = _field(p)
    report = axiom_suite(seed, cases, n_max, fld, list(only) or None, max_dim)
    click.echo(report.summary())
    if dump_dir:
        import os
        os.makedirs(dump_dir, exist_ok=True)
        for res in report.checks:
            if res.first_failure:
                with open(os.path.join(dump_dir, f"{res.name}.fulltri"), "w", encoding="utf-8") as fh:
                    fh.write(res.first_failure)
    _exit(report.exit_code())


if __name__ == "__main__":
    main()
