"""Randomized checks of the axioms and theorems, with reloadable failure dumps."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from fulltri.exact_linalg import GF2, PrimeField
from fulltri.homotopy_model.complexes import ChainMap, ComplexError, shift
from fulltri.homotopy_model.equivalence import cone_obstruction
from fulltri.ntriangle import (
    NTriangle, TriangleMap, add_maps, degenerate, face_pi_map, fgh, identity_map, rotate_sigma,
    rotate_tau, verify_map,
)
from fulltri.distinguished import (
    CompletionError, apply_lightning, build_standard, check_distinguished, check_distinguished_map,
    check_distinguished_map_2, check_sum_theorem, complete_3x3, complete_base_map, face_cycle,
    lightning_difference, neeman_N, neeman_Ndoubleprime, neeman_Nprime, verify_3x3,
)
from fulltri.harness_cli.document import DiagramDocument, parse_document, serialize_document
from fulltri.harness_cli import generators as gen

PASS, FAIL, UNDETERMINED = "pass", "fail", "undetermined"

DEFAULT_MAX_DIM = 3
DEFAULT_SPAN = (-3, 3)


@dataclass
class CheckResult:
    name: str
    cases: int = 0
    passed: int = 0
    failed: int = 0
    undetermined: int = 0
    first_failure: str | None = None     # a DiagramDocument, as text
    first_reason: str = ""
    wall_time: float = 0.0

    @property
    def total(self) -> int:
        return self.passed + self.failed + self.undetermined


@dataclass
class SuiteReport:
    seed: int
    cases: int
    n_max: int
    field: int
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def failed(self) -> int:
        return sum(c.failed for c in self.checks)

    @property
    def undetermined(self) -> int:
        return sum(c.undetermined for c in self.checks)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def exit_code(self) -> int:
        if self.failed:
            return 1
        return 2 if self.undetermined else 0

    def content(self) -> list[tuple]:
        """Everything except timings, for determinism comparisons."""
        return [(c.name, c.cases, c.passed, c.failed, c.undetermined, c.first_failure, c.first_reason)
                for c in self.checks]

    def summary(self) -> str:
        lines = [f"suite seed={self.seed} cases={self.cases} n_max={self.n_max} field=GF({self.field})"]
        for c in self.checks:
            line = (f"  {c.name:<16} cases={c.cases:<4} pass={c.passed:<4} fail={c.failed:<4} "
                    f"undetermined={c.undetermined:<3} {c.wall_time:6.2f}s")
            if c.first_reason:
                line += f"  first: {c.first_reason}"
            lines.append(line)
        lines.append("OK" if self.ok else f"FAILED ({self.failed} failing cases)")
        return "\n".join(lines)


# ------------------------------------------------------------- the checks

def _verdict_status(v) -> str:
    return PASS if v.yes else (UNDETERMINED if v.undetermined else FAIL)


def _gen_isomorphism(rng, n, fld, sz):
    T = gen.random_triangle(rng, n, fld, **sz)
    G = identity_map(T)
    if n == 2:
        # 1 + v tau w is an automorphism of the identity map's third vertex
        tau = gen.random_chain_map(rng, shift(T.obj(0, 1), 1), T.obj(0, 2))
        G = apply_lightning(G, tau)
    return {"G": G}


def _run_isomorphism(inst):
    G = inst["G"]
    for v, f in G.comps.items():
        if cone_obstruction(f) is not None:
            return FAIL, f"component at {v} is not an isomorphism"
    v = check_distinguished_map(G)
    return _verdict_status(v), v.reason


def _gen_rotation(rng, n, fld, sz):
    return {"T": gen.random_triangle(rng, n, fld, **sz)}


def _run_rotation(inst):
    T = inst["T"]
    for label, R in (("tau", rotate_tau(T)), ("sigma", rotate_sigma(T))):
        v = check_distinguished(R)
        if not v.yes:
            return _verdict_status(v), f"{label}-rotation: {v}"
    return PASS, ""


def _gen_faces(rng, n, fld, sz):
    n = max(n, 3)
    S = gen.random_triangle(rng, n, fld, **sz)
    tb, f = gen.random_base_map(rng, S.base(), **sz)
    T = build_standard(tb)[0]
    return {"G": complete_base_map(f, S, T), "D": gen.random_triangle(rng, n - 1, fld, **sz)}


def _run_faces(inst):
    G, D = inst["G"], inst["D"]
    for i in range(G.n + 1):
        v = check_distinguished_map(face_pi_map(G, i))
        if not v.yes:
            return _verdict_status(v), f"face {i} of the map: {v}"
    for i in range(D.n + 1):
        v = check_distinguished(degenerate(D, i))
        if not v.yes:
            return _verdict_status(v), f"degeneracy {i}: {v}"
    return PASS, ""


def _gen_bases(rng, n, fld, sz):
    S = gen.random_triangle(rng, n, fld, **sz)
    tb, f = gen.random_base_map(rng, S.base(), **sz)
    inst = {"S": S, "T": build_standard(tb)[0]}
    inst.update({f"f{j}": fj for j, fj in enumerate(f, 1)})
    return inst


def _run_bases(inst):
    S, T = inst["S"], inst["T"]
    f = [inst[f"f{j}"] for j in range(1, S.n + 1)]
    for X in (S, T):
        v = check_distinguished(X)
        if not v.yes:
            return _verdict_status(v), f"triangle on the base: {v}"
    G = complete_base_map(f, S, T)
    if not verify_map(G).ok:
        return FAIL, "extension is not natural"
    v = check_distinguished_map(G)
    return _verdict_status(v), v.reason


def _gen_lightning(rng, n, fld, sz):
    G = gen.random_distinguished_map(rng, fld, **sz)
    u = G.source.edge(0, 1, 2)
    tau = gen.random_chain_map(rng, shift(u.source, 1), G.target.obj(0, 2))
    return {"G": G, "tau": tau}


def _run_lightning(inst):
    G, tau = inst["G"], inst["tau"]
    G2 = apply_lightning(G, tau)
    for label, M in (("original", G), ("struck", G2)):
        v = check_distinguished_map_2(M)
        if not v.yes:
            return _verdict_status(v), f"{label} map: {v}"
    if lightning_difference(G, G2) is None:
        return FAIL, "no lightning strike connects the two completions"
    return PASS, ""


def _gen_sum(rng, n, fld, sz):
    G1 = gen.random_distinguished_map(rng, fld, **sz)
    G2 = gen.random_distinguished_map(rng, fld, **sz)
    if rng.integers(0, 3) == 0:
        G2 = gen.perturb_third(rng, G2)
    G3 = gen.random_map_between(rng, G1.source, G1.target)
    return {"G1": G1, "G2": G2, "G3": G3}


def _run_sum(inst):
    G1, G2, G3 = inst["G1"], inst["G2"], inst["G3"]
    try:
        rep = check_sum_theorem(G1, G2)
    except AssertionError as exc:
        return FAIL, str(exc)
    if not rep.determined:
        return UNDETERMINED, "a verdict was undetermined"
    v = check_distinguished_map_2(add_maps(G1, G3))
    return _verdict_status(v), "" if v.yes else f"G1 + G3: {v}"


def _gen_neeman(rng, n, fld, sz):
    G = gen.random_distinguished_map(rng, fld, **sz)
    if rng.integers(0, 2):
        G = gen.perturb_third(rng, G)
    return {"G": G}


def _run_neeman(inst):
    G = inst["G"]
    base = check_distinguished_map_2(G)
    if base.undetermined:
        return UNDETERMINED, "verdict on G undetermined"
    for label, M in (("N", neeman_N(G)), ("N'", neeman_Nprime(G)), ("N''", neeman_Ndoubleprime(G))):
        v = check_distinguished_map_2(M)
        if v.undetermined:
            return UNDETERMINED, f"verdict on {label} undetermined"
        if v.status != base.status:
            return FAIL, f"{label}(G) is {v.status} but G is {base.status}"
    return PASS, ""


def _gen_face_cycle(rng, n, fld, sz):
    return {"T": gen.random_triangle(rng, max(n, 3), fld, **sz)}


def _run_face_cycle(inst):
    for m, (G, v) in enumerate(face_cycle(inst["T"])):
        if not v.yes:
            return _verdict_status(v), f"face-cycle map {m}: {v}"
    return PASS, ""


def _gen_3x3(rng, n, fld, sz):
    keys = ("row1", "row2", "col1", "col2", "G_col", "G_row")
    return dict(zip(keys, gen.random_3x3_instance(rng, fld, **sz)))


def _run_3x3(inst):
    args = [inst[k] for k in ("row1", "row2", "col1", "col2", "G_col", "G_row")]
    try:
        D = complete_3x3(*args)
    except CompletionError as exc:
        if exc.certified:
            return FAIL, f"no completion exists: {exc.reason}"
        return UNDETERMINED, exc.reason
    rep = verify_3x3(D)
    if not rep["ok"]:
        return FAIL, "completed diagram fails verification"
    if D.cols[2].edge(0, 1, 2) != fgh(inst["G_col"])[2] or D.rows[2].edge(0, 1, 2) != fgh(inst["G_row"])[2]:
        return FAIL, "input maps were modified"
    return PASS, ""


@dataclass(frozen=True)
class Check:
    name: str
    generate: object
    run: object
    min_n: int = 2
    max_n: int | None = None     # None: follow n_max


CHECKS = [
    Check("isomorphism", _gen_isomorphism, _run_isomorphism),
    Check("rotation", _gen_rotation, _run_rotation),
    Check("faces", _gen_faces, _run_faces, min_n=3),
    Check("bases", _gen_bases, _run_bases),
    Check("lightning", _gen_lightning, _run_lightning, max_n=2),
    Check("sum", _gen_sum, _run_sum, max_n=2),
    Check("neeman", _gen_neeman, _run_neeman, max_n=2),
    Check("face-cycle", _gen_face_cycle, _run_face_cycle, min_n=3),
    Check("strong-3x3", _gen_3x3, _run_3x3, max_n=2),
]
CHECKS_BY_NAME = {c.name: c for c in CHECKS}


def _dims(check: Check, n_max: int) -> list[int]:
    hi = check.max_n if check.max_n is not None else max(n_max, check.min_n)
    return list(range(check.min_n, hi + 1))


# ------------------------------------------------------------------ dumps

def dump_instance(check: str, seed: int, n: int, inst: dict, fld: PrimeField,
                  max_dim: int = DEFAULT_MAX_DIM, degree_span=DEFAULT_SPAN) -> DiagramDocument:
    doc = DiagramDocument(p=fld.p)
    lo, hi = degree_span
    doc.meta.update({"check": check, "seed": str(seed), "n": str(n), "max_dim": str(max_dim),
                     "span": f"{lo},{hi}"})
    refs = []
    for key, obj in inst.items():
        if isinstance(obj, NTriangle):
            refs.append(f"{key}=triangle:{doc.add_triangle(obj, key)}")
        elif isinstance(obj, TriangleMap):
            refs.append(f"{key}=trimap:{doc.add_triangle_map(obj, key)}")
        elif isinstance(obj, ChainMap):
            refs.append(f"{key}=map:{doc.add_map(obj, key)}")
        else:
            raise TypeError(f"cannot dump {type(obj).__name__}")
    doc.meta["inputs"] = " ".join(refs)
    return doc


def load_instance(doc: DiagramDocument) -> tuple[str, dict]:
    inst = {}
    for item in doc.meta.get("inputs", "").split():
        key, rest = item.split("=", 1)
        kind, name = rest.split(":", 1)
        if kind == "triangle":
            inst[key] = doc.triangle(name)
        elif kind == "trimap":
            inst[key] = doc.triangle_map(name)
        else:
            inst[key] = doc.chain_map(name)
    return doc.meta["check"], inst


def rerun_dump(text: str) -> tuple[str, str]:
    """Re-run the named check on a failure dump; returns ``(status, reason)``."""
    doc = parse_document(text)
    check, inst = load_instance(doc)
    if doc.meta.get("stage") == "generate":
        # the generator itself broke, so the seed is the whole witness
        lo, hi = map(int, doc.meta["span"].split(","))
        sz = {"max_dim": int(doc.meta["max_dim"]), "degree_span": (lo, hi)}
        _, status, reason = _attempt(CHECKS_BY_NAME[check], int(doc.meta["seed"]),
                                     int(doc.meta["n"]), doc.field, sz)
        return status, reason
    try:
        return CHECKS_BY_NAME[check].run(inst)
    except (AssertionError, ComplexError) as exc:
        return FAIL, f"{type(exc).__name__}: {exc}"


# ------------------------------------------------------------------- suite

def case_seed(seed: int, check: str, index: int) -> int:
    """Independent, reproducible seed for one case of one check."""
    salt = sum(ord(c) * 31 ** k for k, c in enumerate(check)) % (2**31)
    return int(np.random.SeedSequence([seed, salt, index]).generate_state(1)[0])


def run_case(check: Check, seed: int, index: int, n: int, fld: PrimeField,
             max_dim: int = DEFAULT_MAX_DIM, degree_span=DEFAULT_SPAN):
    s = case_seed(seed, check.name, index)
    sz = {"max_dim": max_dim, "degree_span": tuple(degree_span)}
    inst, status, reason = _attempt(check, s, n, fld, sz)
    return s, inst, status, reason


def _attempt(check: Check, s: int, n: int, fld: PrimeField, sz: dict):
    """Generate and run one case.  A broken builder is a failure, not a crash;
    ``inst`` is None when generation itself raised."""
    try:
        inst = check.generate(np.random.default_rng(s), n, fld, sz)
    except (AssertionError, ComplexError) as exc:
        return None, FAIL, f"generator: {type(exc).__name__}: {exc}"
    try:
        status, reason = check.run(inst)
    except (AssertionError, ComplexError) as exc:
        status, reason = FAIL, f"{type(exc).__name__}: {exc}"
    return inst, status, reason


def axiom_suite(seed: int = 0, cases: int = 5, n_max: int = 3, field: PrimeField = GF2,
                only: list[str] | None = None, max_dim: int = DEFAULT_MAX_DIM,
                degree_span=DEFAULT_SPAN) -> SuiteReport:
    """Run ``cases`` seeded instances of every check (or of those named in ``only``)."""
    report = SuiteReport(seed, cases, n_max, field.p)
    for check in CHECKS:
        if only and check.name not in only:
            continue
        res = CheckResult(check.name)
        t0 = time.perf_counter()
        dims = _dims(check, n_max)
        for index in range(cases):
            n = dims[index % len(dims)]
            s, inst, status, reason = run_case(check, seed, index, n, field, max_dim, degree_span)
            res.cases += 1
            if status == PASS:
                res.passed += 1
            elif status == UNDETERMINED:
                res.undetermined += 1
            else:
                res.failed += 1
                if res.first_failure is None:
                    doc = dump_instance(check.name, s, n, inst or {}, field, max_dim, degree_span)
                    if inst is None:
                        doc.meta["stage"] = "generate"
                    res.first_failure = serialize_document(doc)
                    res.first_reason = reason
        res.wall_time = time.perf_counter() - t0
        report.checks.append(res)
    return report


def check_names() -> list[str]:
    return [c.name for c in CHECKS]


__all__ = [
    "CHECKS", "CheckResult", "SuiteReport", "axiom_suite", "check_names", "dump_instance",
    "load_instance", "rerun_dump", "run_case", "PASS", "FAIL", "UNDETERMINED",
]
