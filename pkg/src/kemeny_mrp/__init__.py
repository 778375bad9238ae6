"""Stationary distributions, mean first passage times and Kemeny functions
for finite Markov chains, Markov renewal processes and CTMCs."""

from .chain import (
    MrpSpec,
    StationaryProfile,
    StochasticMatrix,
    make_spec,
    stationary_embedded,
    stationary_profile,
    validate_chain,
)
from .ctmc import (
    BirthDeathParams,
    Generator,
    bd3_closed,
    bd_generator,
    ctmc_profile_H,
    kemeny1_ctmc,
    mrp_from_generator,
    validate_generator,
)
from .ginverse import (
    GInverse,
    eigen_spectrum,
    fundamental_matrix,
    group_inverse,
    parametric_ginverse,
    verify_ginverse,
)
from .kemeny import (
    KemenyReport,
    constancy_equivalence,
    constancy_test,
    kemeny_closed,
    kemeny_constant_dtmc,
    kemeny_from_mfpt,
)
from .linalg import solve_dense
from .mfpt import MfptMatrix, mfpt_closed, mfpt_direct, mfpt_gtilde, mfpt_residual

__version__ = "0.1.0"

__all__ = [
    "BirthDeathParams",
    "GInverse",
    "Generator",
    "KemenyReport",
    "MfptMatrix",
    "MrpSpec",
    "StationaryProfile",
    "StochasticMatrix",
    "bd3_closed",
    "bd_generator",
    "constancy_equivalence",
    "constancy_test",
    "ctmc_profile_H",
    "eigen_spectrum",
    "fundamental_matrix",
    "group_inverse",
    "kemeny1_ctmc",
    "kemeny_closed",
    "kemeny_constant_dtmc",
    "kemeny_from_mfpt",
    "make_spec",
    "mfpt_closed",
    "mfpt_direct",
    "mfpt_gtilde",
    "mfpt_residual",
    "mrp_from_generator",
    "parametric_ginverse",
    "solve_dense",
    "stationary_embedded",
    "stationary_profile",
    "validate_chain",
    "validate_generator",
    "verify_ginverse",
]
