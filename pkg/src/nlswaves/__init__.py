"""Small quasi-periodic traveling waves of the cubic Schrodinger equation.

Core objects: Fourier coefficient fields, the two-parameter wave family
with its Newton-Galerkin solver, Bloch fibers of the linearization, the
near-origin quartet and its reduced quartic, the energy Hessian, and a
split-step integrator for the co-moving equation.
"""

from .errors import (
    BlowupDetected,
    ClusterAmbiguity,
    DegenerateFit,
    EigensolverError,
    NlswavesError,
    NoGrowthFound,
    NonConvergence,
    SingularJacobian,
    TruncationMismatch,
    WrongClusterSize,
)
from .fourier import DEFAULT_TRUNCATION, FourierField
from .waves import (
    Nonlinearity,
    WaveParams,
    WaveProfile,
    expansion_profile,
    invariants,
    period_and_phase,
    plane_wave_profile,
    refine_newton,
    solve_profile,
    symmetry_transform,
    to_Q,
)

__all__ = [
    "BlowupDetected",
    "ClusterAmbiguity",
    "DEFAULT_TRUNCATION",
    "DegenerateFit",
    "EigensolverError",
    "FourierField",
    "NlswavesError",
    "NoGrowthFound",
    "NonConvergence",
    "Nonlinearity",
    "SingularJacobian",
    "TruncationMismatch",
    "WaveParams",
    "WaveProfile",
    "WrongClusterSize",
    "expansion_profile",
    "invariants",
    "period_and_phase",
    "plane_wave_profile",
    "refine_newton",
    "solve_profile",
    "symmetry_transform",
    "to_Q",
]

__version__ = "0.1.0"
