"""
QPManifolds: admissible manifolds and flowline tracing

Layer 5 of the quasipath stack. Manifolds are zero sets of level functions
f_M inside a bounding box; check_admissible samples them and verifies that
b crosses them in one direction. Flow coordinates (z(x), t(x)) and the
signed arclength from a manifold give tracing functions, whose constants
feed the key estimate bounding the length of a curve near M by its action.

Invariants:
- <grad f_M, b> > 0 on sampled zero-set points of an oriented manifold
- psi(z(x), t(x)) == x within flow tolerance
- lhs <= rhs of the key estimate up to node-spacing slack
"""

from .manifold import AdmissibleManifold, FlowLocator, Located
from .primitives import (
    PRIMITIVES,
    sphere,
    level_of_potential,
    hyperplane,
    polynomial_level,
    stable_ball,
)
from .admissible import (
    TOL_ANGLE,
    AdmissibilityReport,
    SignInvariantReport,
    zero_set_points,
    check_admissible,
    orient_manifold,
    admissible,
    check_sign_invariant,
)
from .coordinates import locate, flow_coordinates, evolve_manifold
from .tracing import (
    TracingFunction,
    TracingCheck,
    KeyEstimate,
    clamp,
    tracing_from_manifold,
    tracing_from_equilibrium,
    key_estimate_bound,
    check_tracing,
)
from .registry import available_manifolds, build_manifold, build_manifolds

__all__ = [
    'AdmissibleManifold',
    'FlowLocator',
    'PRIMITIVES',
    'sphere',
    'level_of_potential',
    'hyperplane',
    'polynomial_level',
    'stable_ball',
    'TOL_ANGLE',
    'AdmissibilityReport',
    'SignInvariantReport',
    'zero_set_points',
    'check_admissible',
    'orient_manifold',
    'admissible',
    'check_sign_invariant',
    'Located',
    'locate',
    'flow_coordinates',
    'evolve_manifold',
    'TracingFunction',
    'TracingCheck',
    'KeyEstimate',
    'clamp',
    'tracing_from_manifold',
    'tracing_from_equilibrium',
    'key_estimate_bound',
    'check_tracing',
    'available_manifolds',
    'build_manifold',
    'build_manifolds',
]

__version__ = '0.1.0'
__layer__ = 5
