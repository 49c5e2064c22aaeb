"""
QPFields: drift vector fields and their flows

Layer 2 of the quasipath stack. Provides batched drifts b(x), the numerical
flow psi(x, t), equilibria and their classification, flowline distances
f_s / f_u to attractors and repellors, planar invariant manifolds of saddles
and limit-cycle detection, plus the built-in field registry.

Invariants:
- flow(f, x, 0) == x exactly
- stable_distance(w) >= |w - eq| at every evaluated w
- Divergence is reported (DivergenceError), never hidden by rescaling b
"""

from .field import FlowField, pointwise, jacobian_consistency
from .flow import (
    FlowOptions,
    DEFAULT_OPTIONS,
    SWEEP_OPTIONS,
    Crossing,
    flow,
    flowline,
    first_crossing,
    advance_arclength,
)
from .equilibria import (
    Equilibrium,
    EquilibriumKind,
    classify_eigenvalues,
    make_equilibrium,
    find_equilibria,
    nearest_equilibrium,
)
from .distance import (
    linear_tail_length,
    stable_distance,
    unstable_distance,
    equilibrium_distance,
    linear_bound_constant,
)
from .manifolds2d import (
    InvariantManifolds,
    saddle_directions,
    trace_invariant_manifolds_2d,
    separatrix_from_saddle,
)
from .cycles import LimitCycleReport, detect_limit_cycle, trace_cycle
from .registry import (
    FIELD_REGISTRY,
    available_fields,
    build_field,
    double_well,
    triple_well,
    constant,
    linear_radial,
    limit_cycle,
    birth_death_1d,
    polynomial,
)

__all__ = [
    'FlowField',
    'pointwise',
    'jacobian_consistency',
    'FlowOptions',
    'DEFAULT_OPTIONS',
    'SWEEP_OPTIONS',
    'Crossing',
    'flow',
    'flowline',
    'first_crossing',
    'advance_arclength',
    'Equilibrium',
    'EquilibriumKind',
    'classify_eigenvalues',
    'make_equilibrium',
    'find_equilibria',
    'nearest_equilibrium',
    'linear_tail_length',
    'stable_distance',
    'unstable_distance',
    'equilibrium_distance',
    'linear_bound_constant',
    'InvariantManifolds',
    'saddle_directions',
    'trace_invariant_manifolds_2d',
    'separatrix_from_saddle',
    'LimitCycleReport',
    'detect_limit_cycle',
    'trace_cycle',
    'FIELD_REGISTRY',
    'available_fields',
    'build_field',
    'double_well',
    'triple_well',
    'constant',
    'linear_radial',
    'limit_cycle',
    'birth_death_1d',
    'polynomial',
]

__version__ = '0.1.0'
__layer__ = 2
