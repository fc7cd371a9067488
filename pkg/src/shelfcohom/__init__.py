"""Finite shelves, their translation semigroups and rack cohomology over Z, Q and F_p."""

from .bases import (
    cyclic_basis,
    const_class_coefficient,
    evaluation_matrix,
    laver_basis,
    pk,
    proof_scheme_check,
    verify_theorem_a,
)
from .cohomology import Cochain, apply_differential, cohomology_report, differential_matrix
from .homalg import QQ, ZZ, AbelianGroupPresentation, Coefficients, SparseIntMatrix, smith_normal_form
from .shelf import Shelf, make_cyclic, make_e_shelf, make_laver, make_named, orbits, parse, serialize, validate
from .translations import classify_projectors, iterated_reduce, rack_type, translation_semigroup

__version__ = "0.1.0"
