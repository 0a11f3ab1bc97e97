"""Bounded cochain complexes over GF(p) and their homotopy category."""

from fulltri.homotopy_model.complexes import (
    ChainComplex, ChainMap, ComplexError, Cone, Homotopy, Violation, add, betti, block_map,
    chain_map_defect, complex_from, compose, compose_all, cone, cone_parts, direct_sum, graded_block,
    homotopy_boundary, shift_parts, sum_parts,
    identity, inclusion, is_chain_map, is_exact, mapping_cone, negate, projection, scale, shift,
    validate_complex, witnesses_homotopy, zero_complex, zero_homotopy, zero_map,
)
from fulltri.homotopy_model.equivalence import (
    EquivalenceWitness, cone_obstruction, find_homotopy, homotopic, homotopy_inverse,
    is_contractible, is_homotopy_equivalence, is_nullhomotopic,
)
from fulltri.homotopy_model.linsys import Expr, LinearSystem, Solution, Unknown, place, shifted

__all__ = [
    "ChainComplex", "ChainMap", "ComplexError", "Cone", "Homotopy", "Violation", "add", "betti",
    "block_map", "chain_map_defect", "complex_from", "compose", "compose_all", "cone",
    "direct_sum", "homotopy_boundary", "identity", "inclusion", "is_chain_map", "is_exact",
    "mapping_cone", "negate", "projection", "scale", "shift", "validate_complex",
    "witnesses_homotopy", "zero_complex", "zero_homotopy", "zero_map",
    "EquivalenceWitness", "cone_obstruction", "find_homotopy", "homotopic", "homotopy_inverse",
    "is_contractible", "is_homotopy_equivalence", "is_nullhomotopic",
    "Expr", "LinearSystem", "Solution", "Unknown", "place", "shifted",
    "cone_parts", "graded_block", "shift_parts", "sum_parts",
]
