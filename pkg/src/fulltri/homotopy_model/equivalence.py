"""Homotopies, contractions and homotopy equivalences, decided exactly."""

from __future__ import annotations

from dataclasses import dataclass

from fulltri.homotopy_model.complexes import (
    ChainComplex, ChainMap, ComplexError, Homotopy, betti, compose, identity, mapping_cone,
    witnesses_homotopy, zero_homotopy, zero_map,
)
from fulltri.homotopy_model.linsys import Expr, LinearSystem
from fulltri.verdict import Verdict, no, yes


def find_homotopy(f: ChainMap, g: ChainMap) -> Homotopy | None:
    """A homotopy ``h`` with ``dh + hd = f - g``, or ``None``."""
    if f.source != g.source or f.target != g.target:
        raise ComplexError("find_homotopy needs maps with the same source and target")
    if f == g:
        return zero_homotopy(f.source, f.target)
    sys = LinearSystem(f.field)
    h = sys.homotopic(Expr.of(f) - Expr.of(g))
    sol = sys.solve()
    return None if sol is None else sol[h]


def homotopic(f: ChainMap, g: ChainMap) -> bool:
    return find_homotopy(f, g) is not None


def is_nullhomotopic(f: ChainMap) -> bool:
    return find_homotopy(f, zero_map(f.source, f.target)) is not None


def is_contractible(C: ChainComplex) -> Homotopy | None:
    """A contraction ``h`` with ``dh + hd = 1``, or ``None``."""
    if C.is_zero():
        return zero_homotopy(C, C)
    return find_homotopy(identity(C), zero_map(C, C))


@dataclass
class EquivalenceWitness:
    inverse: ChainMap
    left: Homotopy    # inverse . f  ~  1
    right: Homotopy   # f . inverse  ~  1

    def recheck(self, f: ChainMap) -> bool:
        return (witnesses_homotopy(self.left, compose(self.inverse, f), identity(f.source))
                and witnesses_homotopy(self.right, compose(f, self.inverse), identity(f.target)))


def cone_obstruction(f: ChainMap) -> int | None:
    """First degree where the cone of ``f`` has homology, or ``None``."""
    C = mapping_cone(f).complex
    for n in C.degrees:
        if betti(C, n):
            return n
    return None


def homotopy_inverse(f: ChainMap) -> EquivalenceWitness | None:
    sys = LinearSystem(f.field)
    g = sys.chain_map(f.target, f.source, "inverse")
    left = sys.homotopic(Expr.of(g).after(f), identity(f.source))
    right = sys.homotopic(Expr.of(g).then(f), identity(f.target))
    sol = sys.solve()
    if sol is None:
        return None
    return EquivalenceWitness(sol[g], sol[left], sol[right])


def is_homotopy_equivalence(f: ChainMap, want_inverse: bool = True) -> Verdict:
    """Yes iff the cone of ``f`` is exact; Yes carries an :class:`EquivalenceWitness`."""
    bad = cone_obstruction(f)
    if bad is not None:
        return no(f"cone has homology in degree {bad}")
    if not want_inverse:
        return yes()
    w = homotopy_inverse(f)
    if w is None:  # pragma: no cover - contradicts exactness of the cone
        raise AssertionError("exact cone but no homotopy inverse")
    return yes(witness=w)
