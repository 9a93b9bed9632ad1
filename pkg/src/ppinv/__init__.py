"""Compositional inverses of permutation polynomials over GF(q^2), with a
brute-force oracle to check every closed form against value tables."""

from .errors import (ContextMismatchError, FieldConstructionError, NotPermutationError,
                     OrderCapError, PPInvError, ParameterError)
from .field import FieldCtx, FieldElem, mk_field
from .mapping import GSpec, Mapping, build_P, build_tau, invert_table, is_permutation, tabulate
from .families import catalog, closed_form_inverse, conjugate_pair, get_family, instantiate, lookup
from .verifier import SweepPlan, check_iff, run_sweep, verify_instance

__version__ = "0.1.0"

__all__ = [
    "ContextMismatchError", "FieldConstructionError", "NotPermutationError", "OrderCapError",
    "PPInvError", "ParameterError", "FieldCtx", "FieldElem", "mk_field", "GSpec", "Mapping",
    "build_P", "build_tau", "invert_table", "is_permutation", "tabulate", "catalog",
    "closed_form_inverse", "conjugate_pair", "get_family", "instantiate", "lookup",
    "SweepPlan", "check_iff", "run_sweep", "verify_instance", "__version__",
]
