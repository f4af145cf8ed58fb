"""Ground-state laboratory for an alternating-bond Kitaev chain in a transverse field.

The chain couples sigma^x sigma^x on odd bonds and sigma^y sigma^y on even
bonds, with a uniform transverse field; a Jordan-Wigner map reduces the
ground state to N/4 independent four-state momentum modes.  This package
evaluates the closed-form pair correlators and quantum-information measures
built on them (concurrence, discord, global entanglement, multispecies
entropy density), checks everything against a direct exact-diagonalization
oracle on small chains, and drives parameter sweeps from the command line
(``kitchain sweep|derivatives|verify``).
"""

from .correlators import XState, occupation, offdiag, pair_diag, rho_pair, rho_single
from .ed import (
    ComparisonReport,
    OracleState,
    SpinHamiltonian,
    build_hamiltonian,
    compare,
    ground_state,
    lowest_energy,
    oracle_correlators,
    oracle_measures,
    reduced_density,
    site_basis_entropy_density,
)
from .measures import (
    MeasureRecord,
    binary_entropy,
    concurrence_large_n_approx,
    concurrence_x,
    conditional_entropy,
    conditional_entropy_min,
    discord,
    elliptic_concurrence_h0,
    global_entanglement,
    measure_point,
    multispecies_density,
    wootters,
)
from .modes import (
    ModeAmplitudes,
    ModeEnergies,
    ModelParams,
    amplitudes,
    dispersion,
    ground_energy,
    mode_energies,
    momentum_grid,
)

__version__ = "0.1.0"

__all__ = [
    "ModelParams",
    "ModeEnergies",
    "ModeAmplitudes",
    "momentum_grid",
    "dispersion",
    "mode_energies",
    "amplitudes",
    "ground_energy",
    "XState",
    "occupation",
    "offdiag",
    "pair_diag",
    "rho_single",
    "rho_pair",
    "MeasureRecord",
    "binary_entropy",
    "concurrence_x",
    "wootters",
    "conditional_entropy",
    "conditional_entropy_min",
    "discord",
    "global_entanglement",
    "multispecies_density",
    "measure_point",
    "concurrence_large_n_approx",
    "elliptic_concurrence_h0",
    "SpinHamiltonian",
    "OracleState",
    "ComparisonReport",
    "build_hamiltonian",
    "ground_state",
    "lowest_energy",
    "reduced_density",
    "oracle_correlators",
    "oracle_measures",
    "site_basis_entropy_density",
    "compare",
    "__version__",
]
