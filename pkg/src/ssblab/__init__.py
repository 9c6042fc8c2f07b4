"""ssblab: desk-scale nonlinear coset realizations, matrix-group oracles,
GNS constructions, and symmetry-breaking diagnostics for finite-dimensional
algebras and finite groups."""

from .coset import (
    HRepresentation,
    RealizationConfig,
    RealizationOutput,
    SeriesCoefficients,
    l_coefficients,
    realize,
    realize_broken,
    realize_even_super,
    realize_on_product,
    realize_unbroken,
)
from .errors import (
    CapabilityError,
    DomainError,
    InputError,
    NoGeneratorError,
    NonConvergenceError,
    PreconditionError,
    SsbLabError,
    ValidationError,
)
from .gns import (
    Automorphism,
    Derivation,
    GNSRep,
    StarAlgebra,
    State,
    derivation_hamiltonian,
    evolve_check,
    gns_construct,
    gram_matrix,
    pullback_state,
    stationary_unitary,
    validate_state,
)
from .groups import (
    FiniteGroup,
    InducedRep,
    SectionChoice,
    canonical_section,
    induced_action,
    section_from_representatives,
)
from .lie import (
    AlgebraElement,
    LieAlgebra,
    ReductiveSplit,
    adjoint_matrix,
    bracket,
    even_subalgebra,
    validate_split,
)
from .oracle import (
    FactorizationResult,
    MatrixRepresentation,
    VelocityCheck,
    coset_factorize,
    exp_element,
    velocity_check,
)
from .symmetry import (
    Multiplier,
    SSBVerdict,
    central_extension,
    coboundary_solve,
    commutant_basis,
    detect_ssb,
    implementing_unitary,
    verify_cocycle,
)

__version__ = "0.1.0"
