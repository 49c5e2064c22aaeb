"""
QPActions: local actions and Hamiltonians

Layer 3 of the quasipath stack. Local actions l(x, y) come in closed-form
variants (SDE Randers-type, general-diffusion SDE, Riemannian, Agmon) and a
Hamiltonian-induced variant evaluated through the constrained root system
H_theta = lambda y, H = 0. Also provides the natural drift, the drift
constant, the critical-point test and the Legendre transform.

Invariants:
- l(x, c y) = c l(x, y) for c >= 0, l convex in y, l >= 0
- l(x, 0) = 0; theta_hat = 0 and lambda = 0 at critical points
- drift_constant returns a value in (0, 1/2]
"""

from .hamiltonians import (
    Hamiltonian,
    HamiltonianCheck,
    RATE_FUNCTIONS,
    TOL_CRIT,
    sde_hamiltonian,
    markov_jump_hamiltonian,
    birth_death_hamiltonian,
    riemannian_hamiltonian,
    agmon_hamiltonian,
    rate_function,
    natural_drift,
    drift_constant,
    is_critical_point,
    critical_margin,
    check_hamiltonian,
)
from .theta import (
    ThetaSolution,
    ThetaBatch,
    batched_solve,
    solve_theta,
    solve_theta_batch,
    legendre_lagrangian,
    legendre_lagrangian_batch,
)
from .local import (
    ActionVariant,
    LocalAction,
    LocalActionCheck,
    sde_randers_action,
    sde_general_action,
    riemannian_action,
    agmon_action,
    from_hamiltonian,
    eval_local_action,
    hamiltonian_local_action,
    h0_plus,
    local_drift_near_root,
    check_local_action,
)
from .registry import (
    POTENTIAL_FUNCTIONS,
    build_potential,
    build_hamiltonian,
    build_action,
    available_variants,
)

__all__ = [
    'Hamiltonian',
    'HamiltonianCheck',
    'RATE_FUNCTIONS',
    'TOL_CRIT',
    'sde_hamiltonian',
    'markov_jump_hamiltonian',
    'birth_death_hamiltonian',
    'riemannian_hamiltonian',
    'agmon_hamiltonian',
    'rate_function',
    'natural_drift',
    'drift_constant',
    'is_critical_point',
    'critical_margin',
    'check_hamiltonian',
    'ThetaSolution',
    'ThetaBatch',
    'batched_solve',
    'solve_theta',
    'solve_theta_batch',
    'legendre_lagrangian',
    'legendre_lagrangian_batch',
    'ActionVariant',
    'LocalAction',
    'LocalActionCheck',
    'sde_randers_action',
    'sde_general_action',
    'riemannian_action',
    'agmon_action',
    'from_hamiltonian',
    'eval_local_action',
    'hamiltonian_local_action',
    'h0_plus',
    'local_drift_near_root',
    'check_local_action',
    'POTENTIAL_FUNCTIONS',
    'build_potential',
    'build_hamiltonian',
    'build_action',
    'available_variants',
]

__version__ = '0.1.0'
__layer__ = 3
