from .beta import (
    BetaConstruction,
    InvalidIndices,
    UnsupportedIndices,
    alpha1_alpha_t_representative,
    beta_construction,
    beta_representative,
    beta_t_cocycle,
    invariance_check,
    x_sequence,
)
from .hazewinkel import HazewinkelData, bp_alphabet, hazewinkel
from .hopf import HopfAlgebroid, RightUnitImage, eta_R, hopf, phi, phi_inverse
from .lattice import IntegralLatticeBasis, TensorCoset, b_lattice, coset_reduce, lattice_basis

__all__ = [
    "BetaConstruction",
    "HazewinkelData",
    "HopfAlgebroid",
    "IntegralLatticeBasis",
    "InvalidIndices",
    "RightUnitImage",
    "TensorCoset",
    "UnsupportedIndices",
    "alpha1_alpha_t_representative",
    "b_lattice",
    "beta_construction",
    "beta_representative",
    "beta_t_cocycle",
    "bp_alphabet",
    "coset_reduce",
    "eta_R",
    "hazewinkel",
    "hopf",
    "invariance_check",
    "lattice_basis",
    "phi",
    "phi_inverse",
    "x_sequence",
]
