"""Distinguished triangles and maps: builders, certified deciders and the larger constructions."""

from fulltri.distinguished.standard import build_standard, build_standard_2, composites, cone_map
from fulltri.distinguished.decide import (
    DEFAULT_BUDGET, DEFAULT_SEED, CertificateError, MapWitness, apply_lightning, certificate_inverse,
    certificate_map, certify, check_distinguished, check_distinguished_2, check_distinguished_map,
    check_distinguished_map_2, face_verdicts, lightning_difference, recheck_certificate,
    recheck_map_witness, recheck_verdict, transport,
)
from fulltri.distinguished.good import (
    is_good, mapping_cone_of_map, neeman_N, neeman_Ndoubleprime, neeman_Nprime, neeman_Nprime_iso,
)
from fulltri.distinguished.constructions import (
    FIRST_FACE, FIVE_TRIANGLE_FACES, SECOND_FACE, SUM_FACE, CompletionError, Octahedron, SquareCheck,
    SumReport, ThreeByThree, build_five_triangle, build_sum_witness, check_map_sum, check_sum_theorem,
    complete_3x3, complete_base_map, extend_map_to_3triangle, face_cycle, face_step, face_wrap,
    face_wrap_target, verify_3x3,
)

__all__ = [
    "build_standard", "build_standard_2", "composites", "cone_map",
    "DEFAULT_BUDGET", "DEFAULT_SEED", "CertificateError", "MapWitness", "apply_lightning",
    "certificate_inverse", "certificate_map", "certify", "check_distinguished", "check_distinguished_2",
    "check_distinguished_map", "check_distinguished_map_2", "face_verdicts", "lightning_difference",
    "recheck_certificate", "recheck_map_witness", "recheck_verdict", "transport",
    "is_good", "mapping_cone_of_map", "neeman_N", "neeman_Ndoubleprime", "neeman_Nprime",
    "neeman_Nprime_iso",
    "FIRST_FACE", "FIVE_TRIANGLE_FACES", "SECOND_FACE", "SUM_FACE", "CompletionError", "Octahedron",
    "SquareCheck", "SumReport", "ThreeByThree", "build_five_triangle", "build_sum_witness",
    "check_map_sum", "check_sum_theorem", "complete_3x3", "complete_base_map",
    "extend_map_to_3triangle", "face_cycle", "face_step", "face_wrap", "face_wrap_target", "verify_3x3",
]
