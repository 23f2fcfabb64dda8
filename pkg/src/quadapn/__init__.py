"""quadapn: APN conditions for the quadratic family xbar^3 + a1 xbar^2 x + a2 xbar x^2 + a3 x^3."""
from quadapn.field import FieldCtx, make_field
from quadapn.quad import CoeffTriple, normalize_a1, thetas, varphis
from quadapn.characterize import gamma_verdict, in_theorem_range, theorem_verdict
from quadapn.apncore import differential_uniformity, family_is_apn, func_table, is_permutation
from quadapn.kernels import backend_name
from quadapn.search import SearchSpec, crosscheck, enumerate_triples

__all__ = [
    "FieldCtx", "make_field", "CoeffTriple", "normalize_a1", "thetas", "varphis",
    "gamma_verdict", "in_theorem_range", "theorem_verdict", "differential_uniformity",
    "family_is_apn", "func_table", "is_permutation", "backend_name", "SearchSpec",
    "crosscheck", "enumerate_triples",
]
__version__ = "0.1.0"
