"""Exact Hochschild, cyclic and de Rham computations for graded algebras over Q."""

__version__ = "0.1.0"

from .exact_linear import RatMatrix, homology_dim, kernel_basis, rank
from .graded_algebra import GradedAlgebra, Presentation
from .derham import DeRhamAlgebra, derham_algebra, derham_cohomology_dim, epsilon_extend, kaehler
from .mixed_complex import (MixedComplex, derham_mixed, negative_cyclic_dim, periodic_dim,
                            unit_mixed_complex, verify_mixed_identities)
from .hochschild import (HochschildChains, b_compatibility_suite, hkr_check, hkr_matrix,
                         hochschild_mixed)
from .cotangent import cotangent, derived_hkr_check, regular_sequence_check, sym_shift_dims
from .parsing import parse_poly

__all__ = [
    "RatMatrix", "rank", "kernel_basis", "homology_dim",
    "GradedAlgebra", "Presentation",
    "DeRhamAlgebra", "derham_algebra", "derham_cohomology_dim", "epsilon_extend", "kaehler",
    "MixedComplex", "derham_mixed", "negative_cyclic_dim", "periodic_dim", "unit_mixed_complex",
    "verify_mixed_identities",
    "HochschildChains", "b_compatibility_suite", "hkr_check", "hkr_matrix", "hochschild_mixed",
    "cotangent", "derived_hkr_check", "regular_sequence_check", "sym_shift_dims",
    "parse_poly",
]
