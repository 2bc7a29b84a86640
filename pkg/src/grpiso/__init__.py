"""Isomorphism testing for finite groups A x| Z_m with A abelian and gcd(|A|, m) = 1.

Groups are accessed only through black-box multiplication of opaque encodings.
The main entry point is :func:`group_isomorphism`, which returns a verified
explicit isomorphism or a stated reason why none exists.
"""
from .blackbox import (
    BlackBoxGroup, ClassSGroupSpec, SpecError, build_group, format_spec, load_spec, load_table,
    parse_spec, save_spec, table_group,
)
from .decompose import StandardDecomposition, standard_decompose, verify_standard_decomposition
from .dlog_conj import ConjLogInstance, ConjLogSolution, dlog_up_to_conjugacy
from .field_poly import GF, FieldElem, Poly, ext_field, factor_poly, poly_from_ints
from .iso import IsoResult, Isomorphism, group_isomorphism, verify_isomorphism
from .matrix_forms import (
    Matrix, companion, conjugator, elementary_divisors, invariant_factors, mat_order, similar,
)
from .setdlog import FieldMultiset, SolutionCoset, set_discrete_log

__version__ = "0.1.0"

__all__ = [
    "BlackBoxGroup", "ClassSGroupSpec", "SpecError", "build_group", "format_spec", "load_spec",
    "load_table", "parse_spec", "save_spec", "table_group", "StandardDecomposition",
    "standard_decompose", "verify_standard_decomposition", "ConjLogInstance", "ConjLogSolution",
    "dlog_up_to_conjugacy", "GF", "FieldElem", "Poly", "ext_field", "factor_poly", "poly_from_ints",
    "IsoResult", "Isomorphism", "group_isomorphism", "verify_isomorphism", "Matrix", "companion",
    "conjugator", "elementary_divisors", "invariant_factors", "mat_order", "similar",
    "FieldMultiset", "SolutionCoset", "set_discrete_log",
]
