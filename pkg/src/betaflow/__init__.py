"""Symbolic and exact-arithmetic tools for intermediate beta-transformations
x -> beta*x + alpha (mod 1), their kneading data, finite-type structure and
survivor sets of holes at zero."""

from .errors import BetaflowError
from .itinerary import LOWER, UPPER, Params, apply_map, expansion, orbit, project_pi
from .kneading import (kneading_invariants, is_sft, solve_parry_beta, system_from_kneading_pair,
                       validate_kneading_pair)
from .numerics import AlgebraicReal, Approx, golden, max_real_root_in
from .words import EPWord, lex_compare

__version__ = "0.1.0"

__all__ = [
    "AlgebraicReal", "Approx", "BetaflowError", "EPWord", "LOWER", "Params", "UPPER",
    "apply_map", "expansion", "golden", "is_sft", "kneading_invariants", "lex_compare",
    "max_real_root_in", "orbit", "project_pi", "solve_parry_beta", "system_from_kneading_pair",
    "validate_kneading_pair",
]
