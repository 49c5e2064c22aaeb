"""
QPFunctional: action functionals and their bounds

Layer 4 of the quasipath stack. The geometric action S(gamma) of a polyline
(one local-action evaluation per chord midpoint), the time-parameterized
action S_T(chi) through the Legendre transform, the comparison of the two,
and the upper and drift lower bounds.

Invariants:
- S(concat(a, b)) == S(a) + S(b) up to rounding
- S(gamma) <= action_upper_bound(gamma)
- S(gamma) <= S_T(chi) for every time parameterization chi of gamma
"""

from .action import (
    chord_actions,
    geometric_action,
    hamiltonian_action,
    RefinementReport,
    refinement_study,
)
from .timed import (
    DOUBLE_INF_TOL,
    time_action,
    constant_speed_parameterization,
    DoubleInfReport,
    compare_double_inf,
)
from .bounds import (
    bound_constant,
    BoundReport,
    action_upper_bound,
    upper_bound_report,
    DriftBoundReport,
    drift_lower_bound_check,
)

__all__ = [
    'chord_actions',
    'geometric_action',
    'hamiltonian_action',
    'RefinementReport',
    'refinement_study',
    'DOUBLE_INF_TOL',
    'time_action',
    'constant_speed_parameterization',
    'DoubleInfReport',
    'compare_double_inf',
    'bound_constant',
    'BoundReport',
    'action_upper_bound',
    'upper_bound_report',
    'DriftBoundReport',
    'drift_lower_bound_check',
]

__version__ = '0.1.0'
__layer__ = 4
