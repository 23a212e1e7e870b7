"""Iterated cobar constructions, homotopy G-algebra operations and free Gerstenhaber models."""

from __future__ import annotations

__version__ = "0.1.0"

from .fields import F2, Q, Field, field_from_name
from .linalg import SparseMatrix, homology, kernel_basis, rank, rref
from .dgc import (CoalgebraError, DgCoalgebra, ParseError, double_suspension, homology_coalgebra,
                  parse_coalgebra, random_coalgebra)
from .cobar import CobarAlgebra, antipode, check_bialgebra, cobar, coproduct_nabla0, double_cobar
from .hga import HgaStructure, check_hga_identities, hga_structure
from .free_gerst import FreeModel, canonical_bv, free_model, hilbert_series, lie_basis
from .homology_ring import (HomologyAlgebra, check_gerstenhaber_axioms, check_well_defined, homology_algebra,
                            verify_bv, verify_freeness)
from .transfer import build_contraction, cobar_gamma, transfer_ainfty, verify_formality
from .hirsch import TwistingFamily, build_nabla_E, check_hirsch, parse_family

__all__ = [
    "F2", "Q", "Field", "field_from_name",
    "SparseMatrix", "homology", "kernel_basis", "rank", "rref",
    "CoalgebraError", "DgCoalgebra", "ParseError", "double_suspension", "homology_coalgebra",
    "parse_coalgebra", "random_coalgebra",
    "CobarAlgebra", "antipode", "check_bialgebra", "cobar", "coproduct_nabla0", "double_cobar",
    "HgaStructure", "check_hga_identities", "hga_structure",
    "FreeModel", "canonical_bv", "free_model", "hilbert_series", "lie_basis",
    "HomologyAlgebra", "check_gerstenhaber_axioms", "check_well_defined", "homology_algebra",
    "verify_bv", "verify_freeness",
    "build_contraction", "cobar_gamma", "transfer_ainfty", "verify_formality",
    "TwistingFamily", "build_nabla_E", "check_hirsch", "parse_family",
]
