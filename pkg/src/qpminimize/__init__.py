"""
QPMinimize: minimum action curves

Layer 7 of the quasipath stack. Relaxes discretised curves between two
endpoint sets to local minimizers of the geometric action, bends curve ends
into the flow to check the descent property, and analyses computed
minimizers: separatrix hitting points, node-density spikes and winding.

Invariants:
- the action history of a run is strictly decreasing
- endpoints of every iterate lie in their sets within 1e-8
- identical problem and seed curve give identical results for any thread count
"""

from .sets import SetKind, EndpointSet, sets_disjoint
from .problem import MIN_NODES, STALL_WINDOW, MinimizeProblem, MinimizeResult
from .seed import seed_curve, confinement_radius
from .hitting import (
    PASS_TOL,
    HittingReport,
    SpikeReport,
    winding_number,
    hitting_report,
    density_spikes,
)
from .solver import GRADIENT_STEP, discrete_gradient, minimize
from .perturb import BEND_EPS, bend_end_family, descent_derivative, off_flow_segments
from .io import result_document, write_minimize_result

__all__ = [
    'SetKind',
    'EndpointSet',
    'sets_disjoint',
    'MIN_NODES',
    'STALL_WINDOW',
    'MinimizeProblem',
    'MinimizeResult',
    'seed_curve',
    'confinement_radius',
    'PASS_TOL',
    'HittingReport',
    'SpikeReport',
    'winding_number',
    'hitting_report',
    'density_spikes',
    'GRADIENT_STEP',
    'discrete_gradient',
    'minimize',
    'BEND_EPS',
    'bend_end_family',
    'descent_derivative',
    'off_flow_segments',
    'result_document',
    'write_minimize_result',
]

__version__ = '0.1.0'
__layer__ = 7
