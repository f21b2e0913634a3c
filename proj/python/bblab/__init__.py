"""Invertible machine-to-formula reductions, selector gadgets and backbone
extraction.

Thin wrapper over the compiled _core module; formulas travel as their
canonical serializations, machines as .tm text.
"""

from ._core import (
    FormulaParseError,
    NotABackboneError,
    ToolkitError,
    __version__,
    accepts,
    backbone_value,
    build_a3k,
    build_thm3,
    canonical_tag,
    compute_m,
    export_dimacs,
    frozen_brute,
    frozen_sat,
    invert,
    member,
    reduce,
    roundtrip,
    solve,
    transfer_check,
    variables,
    verify_backbone,
)

__all__ = [
    "FormulaParseError",
    "NotABackboneError",
    "ToolkitError",
    "__version__",
    "accepts",
    "backbone_value",
    "build_a3k",
    "build_thm3",
    "canonical_tag",
    "compute_m",
    "export_dimacs",
    "frozen_brute",
    "frozen_sat",
    "invert",
    "member",
    "reduce",
    "roundtrip",
    "solve",
    "transfer_check",
    "variables",
    "verify_backbone",
]
