"""Quadratic 2-step nilpotent Lie algebras built from d-quadratic families of
skew-symmetric matrices, with exact rational and polynomial arithmetic."""
from .arith import ArityMismatch, Rational, SparsePoly, format_rational, parse_rational
from .family import (
    Assignment,
    QuadraticReport,
    StructureMatrix,
    SymbolicFamily,
    adjoint,
    adjoint_recursive,
    build_B,
    is_d_quadratic,
    num_params,
)
from .linalg import Matrix, ShapeError, det, exterior_square, rank_exact
from .algebra import TwoStepAlgebra, bi_type, center, derived, is_reduced, mult_table
from .isometry import AutoSpec, SingularQ, hat, is_automorphism, tau, transform, verify_iso
from .search import (
    achieving_pairs,
    certify_support,
    generic_rank,
    impossibility_certificate,
    min_support,
)
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "ArityMismatch",
    "Rational",
    "SparsePoly",
    "format_rational",
    "parse_rational",
    "Assignment",
    "QuadraticReport",
    "StructureMatrix",
    "SymbolicFamily",
    "adjoint",
    "adjoint_recursive",
    "build_B",
    "is_d_quadratic",
    "num_params",
    "Matrix",
    "ShapeError",
    "det",
    "exterior_square",
    "rank_exact",
    "TwoStepAlgebra",
    "bi_type",
    "center",
    "derived",
    "is_reduced",
    "mult_table",
    "AutoSpec",
    "SingularQ",
    "hat",
    "is_automorphism",
    "tau",
    "transform",
    "verify_iso",
    "achieving_pairs",
    "certify_support",
    "generic_rank",
    "impossibility_certificate",
    "min_support",
    "BACKEND",
]
