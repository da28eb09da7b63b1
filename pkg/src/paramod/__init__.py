"""Modular data, characters and branching functions of parafermion algebras K(g,k)."""

__version__ = "0.1.0"

from .affinekit import (
    AffineLabel,
    MultTable,
    affine_character_eval,
    central_charge,
    conformal_weight,
    dominant_weights,
    kac_peterson_S,
    weight_multiplicities,
)
from .errors import (
    InvalidAlgebraError,
    LatticeError,
    ParamodError,
    ResourceLimitError,
    VerificationError,
    WeylCapExceeded,
)
from .latticekit import CosetSystem, Lattice, dual_lattice, duality_pairing_check, quotient, scale, standard_lattices
from .parafermion import (
    ParafermionData,
    ParafermionLabel,
    branching_function,
    canonical_labels,
    parafermion_S,
    parafermion_T,
    verify_orbifold_identity,
    verify_S_transform,
    verlinde_fusion,
)
from .qseries import QSeries, eta_series, evaluate, lattice_S_matrix, theta_eval
from .rootsys import AlgebraDescriptor, WeightVec, build_algebra, inner, weyl_group

__all__ = [
    "AffineLabel",
    "AlgebraDescriptor",
    "CosetSystem",
    "InvalidAlgebraError",
    "Lattice",
    "LatticeError",
    "MultTable",
    "ParafermionData",
    "ParafermionLabel",
    "ParamodError",
    "QSeries",
    "ResourceLimitError",
    "VerificationError",
    "WeightVec",
    "WeylCapExceeded",
    "affine_character_eval",
    "branching_function",
    "build_algebra",
    "canonical_labels",
    "central_charge",
    "conformal_weight",
    "dominant_weights",
    "dual_lattice",
    "duality_pairing_check",
    "eta_series",
    "evaluate",
    "inner",
    "kac_peterson_S",
    "lattice_S_matrix",
    "parafermion_S",
    "parafermion_T",
    "quotient",
    "scale",
    "standard_lattices",
    "theta_eval",
    "verify_S_transform",
    "verify_orbifold_identity",
    "verlinde_fusion",
    "weight_multiplicities",
    "weyl_group",
]
