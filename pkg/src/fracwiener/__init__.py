"""Fractional powers of Wiener processes by Euler-Maruyama discretization.

The package builds the alpha-root of a discretized Brownian path by three
schemes (direct complex power, the mu0/Phi closed form, and a Pauli-matrix
valued variant) and recovers the original path from each of them.
"""

from .types import (
    BrownianPath,
    ComplexPath,
    PhiSequence,
    SignSequence,
    TimeGrid,
    cumulative_sum,
    increments,
    phi_from_sign,
    sign_of,
    signs,
)
from .pathgen import SeedSpec, brownian_path, gaussian_increments, path_from_increments
from .fracpower import (
    Alpha,
    MuZero,
    Scheme,
    SqrtRepMode,
    SquaredJumpTerms,
    direct_power_path,
    recover_brownian,
    recovery_error_bound,
    sqrt_rep_coefficient,
    sqrt_rep_path,
    squared_jump_decomposition,
)
from .clifford import (
    CliffordPath,
    PauliPair,
    clifford_jump,
    clifford_path,
    clifford_square,
    identity,
    pauli,
)
from .ensemble import EnsembleConfig, EnsembleSummary, residual_decomposition_stats, run_ensemble, single_path_profile

__version__ = "0.1.0"
