"""Graded ladder algebras, order-k supersymmetry, and partner hierarchies.

Build a truncated graded Fock-space representation from a set of structure
functions, assemble the order-k supersymmetric system (H, Q-, Q+) with its
k partner Hamiltonians, decompose it into k-1 ordinary supersymmetric
subsystems, and verify every defining identity numerically.
"""

from .errors import (
    ConfigError,
    FactorizationBroken,
    FracsusyError,
    ProjectorDegenerate,
    RepresentationInvalid,
)
from .graded_rep import (
    GradedRep,
    StructureFunctionSet,
    build_ladder_profile,
    build_projectors,
    build_rep,
    grade_of,
    vacuum_grade,
    verify_algebra_relations,
)
from .fsusy_core import (
    FractionalSystem,
    Subsystem,
    build_hamiltonian,
    build_subsystem,
    build_supercharges,
    build_system,
    factorize_partner,
    partner_hamiltonians,
    verify_fractional_relations,
    verify_subsystem,
    verify_superposition,
)
from .spectra import (
    AlgebraClass,
    SpectrumTable,
    classify,
    closure_check,
    isospectral_check,
    spectrum,
    termination_depth,
)
from .report import (
    DEFAULT_TOL,
    IdentityRecord,
    RunConfig,
    VerificationReport,
    residual,
)
from .cli import main, run_verification

__version__ = "0.1.0"

__all__ = [
    "AlgebraClass",
    "ConfigError",
    "DEFAULT_TOL",
    "FactorizationBroken",
    "FractionalSystem",
    "FracsusyError",
    "GradedRep",
    "IdentityRecord",
    "ProjectorDegenerate",
    "RepresentationInvalid",
    "RunConfig",
    "SpectrumTable",
    "StructureFunctionSet",
    "Subsystem",
    "VerificationReport",
    "build_hamiltonian",
    "build_ladder_profile",
    "build_projectors",
    "build_rep",
    "build_subsystem",
    "build_supercharges",
    "build_system",
    "classify",
    "closure_check",
    "factorize_partner",
    "grade_of",
    "isospectral_check",
    "main",
    "partner_hamiltonians",
    "residual",
    "run_verification",
    "spectrum",
    "termination_depth",
    "vacuum_grade",
    "verify_algebra_relations",
    "verify_fractional_relations",
    "verify_subsystem",
    "verify_superposition",
    "__version__",
]
