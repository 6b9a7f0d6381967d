"""
Invariant quadratic operators of linear canonical transformations.

Symplectic transformation laws for Gaussian-state statistics over
pseudo-Euclidean phase spaces, truncated Fock-space spectra of the bosonic
invariants, the thermodynamics of a gas with minimal momentum dispersion and
the Clifford-algebra classification of spinor states.
"""

__version__ = "0.1.0"

from .exceptions import (
    DimensionError,
    LCTError,
    MinimalUncertaintyError,
    NormalizabilityError,
    NotSymplecticError,
    TruncationError,
)
from .lct_group import (
    CovarianceBlocks,
    LctMatrix,
    MeanVector,
    Metric,
    compose,
    covariance_invariant,
    identity_lct,
    inverse,
    is_symplectic,
    random_lct,
    special_rotation_lct,
    symplectic_residual,
    transform_covariance,
    transform_means,
    unitary_factor,
)
from .gaussian_state import (
    FactorTriple,
    GaussianState,
    apply_lct,
    coherent_overlap,
    factorize_covariance,
    make_minimal_state,
    random_minimal_state,
    wavefunction_eval,
)
from .fock_oscillator import (
    FockOperator,
    FockSpace,
    GridSpec,
    annihilation,
    bosonic_number,
    covariant_hamiltonian,
    dispersion_operator,
    grid_zplus,
    hermite_wavefunction,
    invariant_zplus,
    resolution_of_identity_check,
)
from .thermo_gas import (
    ThermoParams,
    canonical_density_and_entropy,
    coherent_trace_partition,
    effective_frequency,
    partition_single_3d,
    pressure,
    variance_from_thermo,
)
from .clifford_fermions import (
    CliffordRep,
    FermionRow,
    build_clifford,
    classify_fermions,
    mixed_invariant_check,
    quantum_numbers,
    sigma_invariant,
    xi_generators,
    zeta_operators,
)
