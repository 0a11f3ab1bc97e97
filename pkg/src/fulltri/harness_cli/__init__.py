"""Document format, random generators, the verification suite, rendering and the CLI."""

from fulltri.harness_cli.document import (
    FORMAT_VERSION, DiagramDocument, ParseError, Ref, parse_document, parse_ref, serialize_document,
)
from fulltri.harness_cli.generators import (
    random_3x3_instance, random_base, random_base_map, random_chain_map, random_complex,
    random_distinguished_map, random_homotopy, random_map_between, random_square, random_triangle,
)
from fulltri.harness_cli.render import render_balmer
from fulltri.harness_cli.suite import (
    CheckResult, SuiteReport, axiom_suite, check_names, dump_instance, load_instance, rerun_dump,
)

__all__ = [
    "FORMAT_VERSION", "DiagramDocument", "ParseError", "Ref", "parse_document", "parse_ref",
    "serialize_document",
    "random_3x3_instance", "random_base", "random_base_map", "random_chain_map", "random_complex",
    "random_distinguished_map", "random_homotopy", "random_map_between", "random_square",
    "random_triangle",
    "render_balmer",
    "CheckResult", "SuiteReport", "axiom_suite", "check_names", "dump_instance", "load_instance",
    "rerun_dump",
]
