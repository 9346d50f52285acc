"""Real orthonormal symmetry-adapted basis functions for the tetrahedral,
octahedral and icosahedral rotation groups."""

from .groups import (Group, Irrep, build_atlas, generate_group, extend_irrep,
                     irrep_multiplicity)
from .realify import (RealIrrep, RealnessVerdict, frobenius_schur,
                      solve_real_irrep, solve_all)
from .basis import BasisSet, CoeffMatrix, build_basis, build_basis_set, assemble_full_H
from .verify import quadrature_grid, verify_basis_set

__all__ = [
    "Group", "Irrep", "build_atlas", "generate_group", "extend_irrep",
    "irrep_multiplicity",
    "RealIrrep", "RealnessVerdict", "frobenius_schur", "solve_real_irrep",
    "solve_all",
    "BasisSet", "CoeffMatrix", "build_basis", "build_basis_set",
    "assemble_full_H",
    "quadrature_grid", "verify_basis_set",
]

__version__ = "0.1.0"
