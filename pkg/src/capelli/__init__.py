"""Capelli interpolation polynomials for multiplicity-free structures.

Exact arithmetic throughout: polynomials over Q, factored rational
coefficients for difference operators, and rational special values.
"""
from .catalog import (
    CASE_IDS, DESK_CASES, CaseSpec, build_case, generic_params, geometric_params, list_cases,
    load_structure_file, structure_from_document,
)
from .diffop import (
    DifferenceOperator, NonPolynomialResult, NonzeroTailTerm, apply, apply_dh, b_coeff_paths, build_E,
    build_L, d_operator, f_tau, minus,
)
from .exact import (
    FactoredRationalFunction, LinearForm, Polynomial, SingularSystem, UndefinedValue, Weight, rat,
    solve_exact,
)
from .interp import (
    CapelliPolynomial, DimensionMismatch, expand_in_basis, interpolate_p, invariant_basis,
    p_value_by_paths,
)
from .lattice import enumerate_lambda, enumerate_lambda_plus, enumerate_paths, in_lambda, leq
from .pieri import (
    PieriTable, pieri_alternating, pieri_direct, pieri_path_formula, virtual_dimension,
)
from .structure import StructureData, check_axioms, classify_rho

__version__ = "0.1.0"
