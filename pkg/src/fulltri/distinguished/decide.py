"""Certified deciders for distinguished triangles and distinguished maps.

A triangle is distinguished when it is isomorphic, in the homotopy category,
to the standard triangle on its own base.  The search for such an isomorphism
is linear once the base components are fixed to identities: the unknowns are
the cone-vertex components and one homotopy per naturality square.  Being an
isomorphism is not linear, so solutions are sampled and tested.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fulltri.homotopy_model.complexes import (
    ChainMap, Homotopy, add, compose, cone_parts, graded_block, identity, mapping_cone, shift,
    witnesses_homotopy,
)
from fulltri.homotopy_model.equivalence import EquivalenceWitness, cone_obstruction, homotopy_inverse
from fulltri.homotopy_model.linsys import Expr, LinearSystem, place, shifted
from fulltri.ntriangle import (
    DiagramError, NTriangle, TriangleMap, all_two_faces, face_2, face_2_map, fgh, map_2,
    naturality_square, uvw, verify_diagram,
)
from fulltri.simplex_geometry import edge_ends
from fulltri.verdict import (
    EXPLICIT, STANDARD, Certificate, Verdict, no, undetermined, yes,
)
from fulltri.distinguished.standard import build_standard

DEFAULT_BUDGET = 64
DEFAULT_SEED = 0


class CertificateError(ValueError):
    pass


# ------------------------------------------------------------ certificates

def certificate_map(cert: Certificate, T: NTriangle) -> TriangleMap:
    """The isomorphism ``standard -> T`` a certificate stands for."""
    if cert.kind == STANDARD:
        if cert.standard is None or not cert.standard == T:
            raise CertificateError("standard certificate does not match the triangle")
        from fulltri.ntriangle import identity_map
        return identity_map(T)
    if cert.kind == EXPLICIT:
        if cert.data is None or not cert.data.target == T:
            raise CertificateError("certificate isomorphism does not land on the triangle")
        return cert.data
    raise CertificateError(f"unknown certificate kind {cert.kind!r}")


def certificate_inverse(cert: Certificate, v) -> ChainMap:
    """Homotopy inverse of the certificate component at ``v``."""
    if cert.kind == STANDARD:
        return identity(cert.standard.objects[v])
    w = cert.inverses.get(v)
    if w is None:
        raise CertificateError(f"certificate has no inverse at {v}")
    return w.inverse


def recheck_certificate(cert: Certificate, T: NTriangle) -> bool:
    """Re-validate a certificate by matrix multiplication only."""
    if cert.kind == STANDARD:
        S = cert.standard
        if S is None or not S == T:
            return False
        return verify_diagram(S, mode="strict").strict
    G = certificate_map(cert, T)
    if not G.source == build_standard(T.base(), check=False)[0]:
        return False
    for v, f in G.comps.items():
        w = cert.inverses.get(v)
        if w is None or not w.recheck(f):
            return False
    for e in T.shape.edges:
        lhs, rhs = naturality_square(G, e)
        if lhs == rhs:
            continue
        h = cert.naturality.get(e)
        if h is None or not witnesses_homotopy(h, lhs, rhs):
            return False
    return True


def recheck_verdict(v: Verdict, T: NTriangle) -> bool:
    if not v.yes:
        return True
    return recheck_certificate(v.certificate, T)


# --------------------------------------------------------------- triangles

def _isomorphism_system(T: NTriangle, S: NTriangle):
    sys = LinearSystem(T.field)
    phi = {}
    for v in T.shape.vertices:
        if v[0] == 0:
            phi[v] = identity(T.objects[v])
        else:
            phi[v] = sys.chain_map(S.objects[v], T.objects[v], f"phi{v}")
    nat = {}
    for e in T.shape.edges:
        s, t, sh = edge_ends(e)
        lhs = Expr.of(phi[s]).then(T.edgemaps[e])
        right = Expr.of(phi[t])
        right = shifted(right, sh) if sh else right
        rhs = right.after(S.edgemaps[e])
        nat[e] = sys.homotopic(lhs, rhs, f"nat{e}")
    return sys, phi, nat


def check_distinguished(T: NTriangle, budget: int = DEFAULT_BUDGET,
                        seed: int = DEFAULT_SEED) -> Verdict:
    """Is ``T`` isomorphic to the standard triangle on its base?"""
    rep = verify_diagram(T)
    if not rep.ok:
        raise DiagramError(f"ill-formed triangle: {rep.summary()}")
    S, _ = build_standard(T.base(), check=False)
    if S == T:
        return yes(Certificate(STANDARD, standard=S), reason="standard triangle")
    sys, phi, nat = _isomorphism_system(T, S)
    if sys.affine() is None:
        return no("no map from the standard triangle restricts to the identity on the base",
                  fingerprint=sys.fingerprint())
    rng = np.random.default_rng(seed)
    unknown_vs = [v for v in phi if not isinstance(phi[v], ChainMap)]
    for sol in sys.samples(rng, budget):
        comps = {v: (sol[x] if v in unknown_vs else x) for v, x in phi.items()}
        if any(cone_obstruction(comps[v]) is not None for v in unknown_vs):
            continue
        inverses = {}
        for v, f in comps.items():
            w = homotopy_inverse(f) if v in unknown_vs else None
            if w is None:
                C = T.objects[v]
                from fulltri.homotopy_model.complexes import zero_homotopy
                w = EquivalenceWitness(identity(C), zero_homotopy(C, C), zero_homotopy(C, C))
            inverses[v] = w
        G = TriangleMap(S, T, comps)
        naturality = {e: sol[h] for e, h in nat.items()}
        cert = Certificate(EXPLICIT, data=G, inverses=inverses, standard=S, naturality=naturality)
        return yes(cert)
    return undetermined(budget, "a completion exists but no sampled one is an isomorphism")


def check_distinguished_2(T: NTriangle, budget: int = DEFAULT_BUDGET,
                          seed: int = DEFAULT_SEED) -> Verdict:
    """2-triangle case: look for ``phi: C(u) -> c`` with ``phi i ~ v`` and ``w phi ~ pi``."""
    if T.n != 2:
        raise DiagramError("check_distinguished_2 needs a 2-triangle")
    return check_distinguished(T, budget, seed)


def certify(T: NTriangle, budget: int = DEFAULT_BUDGET) -> Certificate:
    """Certificate for a triangle expected to be distinguished (raises otherwise)."""
    v = check_distinguished(T, budget)
    if not v.yes:
        raise CertificateError(f"triangle is not certified distinguished: {v}")
    return v.certificate


# -------------------------------------------------------------------- maps

@dataclass
class MapWitness:
    """``(k, tau, s)`` for a map written in standard coordinates."""

    k: Homotopy
    tau: ChainMap
    s: Homotopy
    transported: TriangleMap


def transport(G: TriangleMap, certS: Certificate, certT: Certificate) -> TriangleMap:
    """``G`` conjugated into the standard coordinates of both endpoints."""
    phiS = certificate_map(certS, G.source)
    phiT = certificate_map(certT, G.target)
    comps = {v: compose(certificate_inverse(certT, v), compose(G.comps[v], phiS.comps[v]))
             for v in G.comps}
    return TriangleMap(phiS.source, phiT.source, comps)


def _cone_map_expr(Gs: TriangleMap, sys: LinearSystem):
    """Unknowns and the expression ``[[f,0],[k,g]] + i' tau pi + ds + sd``."""
    u = Gs.source.edgemaps[(0, 1, 2)]
    u2 = Gs.target.edgemaps[(0, 1, 2)]
    f, g, _ = fgh(Gs)
    a, b2 = u.source, u2.target
    C1, C2 = mapping_cone(u), mapping_cone(u2)
    k = sys.homotopy(a, b2, "k")
    tau = sys.chain_map(shift(a, 1), b2, "tau")
    s = sys.homotopy(C1.complex, C2.complex, "s")
    sys.require_zero(Expr.of(compose(g, u)) - Expr.of(compose(u2, f)) - Expr.of(k).boundary())
    known = graded_block(C1.complex, C2.complex, cone_parts(u), cone_parts(u2), [[f, 0], [0, g]],
                         check=False)
    kpart = place(k, C1.complex, C2.complex, cone_parts(u), cone_parts(u2), 1, 0)
    light = Expr.of(tau).after(C1.projection).then(C2.inclusion)
    total = Expr.of(known) + kpart + light + Expr.of(s).boundary()
    return k, tau, s, total


def check_distinguished_map_2(G: TriangleMap, certS: Certificate | None = None,
                              certT: Certificate | None = None) -> Verdict:
    """Is ``G`` isomorphic to a homotopy-type cone map between standard triangles?"""
    if G.n != 2:
        raise DiagramError("check_distinguished_map_2 needs a map of 2-triangles")
    if certS is None:
        certS = certify(G.source)
    if certT is None:
        certT = certify(G.target)
    Gs = transport(G, certS, certT)
    sys = LinearSystem(G.source.field)
    k, tau, s, total = _cone_map_expr(Gs, sys)
    sys.require_equal(Expr.of(Gs.comps[(1, 2)]), total)
    sol = sys.solve()
    if sol is None:
        return no("no homotopy-type cone map matches the third component",
                  fingerprint=sys.fingerprint())
    return yes(witness=MapWitness(sol[k], sol[tau], sol[s], Gs))


def recheck_map_witness(w: MapWitness) -> bool:
    """Re-multiply a distinguished-map witness."""
    Gs = w.transported
    u = Gs.source.edgemaps[(0, 1, 2)]
    u2 = Gs.target.edgemaps[(0, 1, 2)]
    f, g, h = fgh(Gs)
    if not witnesses_homotopy(w.k, compose(g, u), compose(u2, f)):
        return False
    C1, C2 = mapping_cone(u), mapping_cone(u2)
    cm = graded_block(C1.complex, C2.complex, cone_parts(u), cone_parts(u2), [[f, 0], [w.k, g]])
    light = compose(C2.inclusion, compose(w.tau, C1.projection))
    return witnesses_homotopy(w.s, h, add(cm, light))


def check_distinguished_map(G: TriangleMap, certS: Certificate | None = None,
                            certT: Certificate | None = None) -> Verdict:
    """Maps of n-triangles: every 2-face map must be distinguished."""
    if G.n == 2:
        return check_distinguished_map_2(G, certS, certT)
    witnesses = {}
    for x, y, z in all_two_faces(G.n):
        v = check_distinguished_map_2(face_2_map(G, x, y, z))
        if not v.yes:
            return no(f"2-face ({x},{y},{z}): {v.reason}", fingerprint=v.fingerprint)
        witnesses[(x, y, z)] = v.witness
    return yes(witness=witnesses)


# --------------------------------------------------------------- lightning

def lightning_difference(G: TriangleMap, G2: TriangleMap):
    """``(tau, s)`` with ``h2 - h = v' tau w + ds + sd``, or ``None``."""
    if G.n != 2 or G2.n != 2:
        raise DiagramError("lightning strikes act on maps of 2-triangles")
    if not (G.source == G2.source and G.target == G2.target):
        raise DiagramError("lightning_difference needs maps with equal endpoints")
    _, _, w = uvw(G.source)
    _, v2, _ = uvw(G.target)
    h, h2 = G.comps[(1, 2)], G2.comps[(1, 2)]
    sys = LinearSystem(G.source.field)
    tau = sys.chain_map(w.target, v2.source, "tau")
    s = sys.homotopy(h.source, h.target, "s")
    sys.require_equal(Expr.of(h2) - Expr.of(h),
                      Expr.of(tau).after(w).then(v2) + Expr.of(s).boundary())
    sol = sys.solve()
    return None if sol is None else (sol[tau], sol[s])


def apply_lightning(G: TriangleMap, tau: ChainMap) -> TriangleMap:
    """Replace ``h`` by ``h + v' tau w``."""
    if G.n != 2:
        raise DiagramError("lightning strikes act on maps of 2-triangles")
    _, _, w = uvw(G.source)
    _, v2, _ = uvw(G.target)
    if tau.source != w.target or tau.target != v2.source:
        raise DiagramError("tau must map a[1] -> b'")
    f, g, h = fgh(G)
    return map_2(G.source, G.target, f, g, add(h, compose(v2, compose(tau, w))))


def face_verdicts(T: NTriangle, budget: int = DEFAULT_BUDGET) -> dict:
    """``check_distinguished_2`` on every 2-face of ``T``."""
    return {xyz: check_distinguished_2(face_2(T, *xyz), budget) for xyz in all_two_faces(T.n)}
