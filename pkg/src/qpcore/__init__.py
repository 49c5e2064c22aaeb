"""
QPCore: shared kernel

Layer 0 of the quasipath stack: boxes and grids, the error hierarchy, finite
differences, deterministic reductions and seeded randomness. Every other
layer builds on these and nothing here depends on them.
"""

from .errors import (
    QuasipathError,
    ConfigError,
    ScenarioParseError,
    InvalidCurveError,
    DegenerateCurveError,
    EndpointMismatchError,
    DivergenceError,
    NotInBasinError,
    DegenerateSaddleError,
    MetricError,
    DomainError,
    SolverFailureError,
    EmptyManifoldError,
    NotReachableError,
    ShrinkEpsError,
    PreconditionError,
    ActionEvaluationError,
    LedgerIntegrityError,
)
from .types import Box, GridSpec, as_point
from .numerics import (
    DEFAULT_SEED,
    make_rng,
    numerical_jacobian,
    numerical_gradient,
    pairwise_sum,
    unit_directions,
    thread_count,
    parallel_map,
)

__all__ = [
    'QuasipathError',
    'ConfigError',
    'ScenarioParseError',
    'InvalidCurveError',
    'DegenerateCurveError',
    'EndpointMismatchError',
    'DivergenceError',
    'NotInBasinError',
    'DegenerateSaddleError',
    'MetricError',
    'DomainError',
    'SolverFailureError',
    'EmptyManifoldError',
    'NotReachableError',
    'ShrinkEpsError',
    'PreconditionError',
    'ActionEvaluationError',
    'LedgerIntegrityError',
    'Box',
    'GridSpec',
    'as_point',
    'DEFAULT_SEED',
    'make_rng',
    'numerical_jacobian',
    'numerical_gradient',
    'pairwise_sum',
    'unit_directions',
    'thread_count',
    'parallel_map',
]

__version__ = '0.1.0'
__layer__ = 0
