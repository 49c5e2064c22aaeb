"""
action.py

The geometric action S(gamma) = sum over chords of l(midpoint, chord).

Homogeneity of l in its direction argument makes the chord sum independent
of how fast the nodes traverse the curve, so no time parameter enters.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from src.qpactions import Hamiltonian, LocalAction, from_hamiltonian
from src.qpcore import ConfigError, pairwise_sum
from src.qpcurves import Curve, as_curve, assert_curve_invariants

logger = logging.getLogger(__name__)


def chord_actions(a: LocalAction, c: Curve) -> np.ndarray:
    """Per-chord contributions l(midpoint_k, chord_k)"""
    c = as_curve(c)
    assert_curve_invariants(c, a.dim, operation='geometric_action')
    return a.evaluate_batch(c.midpoints(), c.chords())


def geometric_action(a: LocalAction, c: Curve) -> float:
    """
    Geometric action of a polyline.

    Args:
        a: Local action
        c: Curve of matching dimension

    Returns:
        S(c) >= 0, summed in a fixed pairwise order

    Raises:
        InvalidCurveError: Dimension mismatch
        MetricError, DomainError, SolverFailureError: From the local action
    """
    return pairwise_sum(chord_actions(a, c))


def hamiltonian_action(h: Hamiltonian, c: Curve, seed: Optional[int] = None) -> float:
    """Geometric action of the action induced by a Hamiltonian"""
    return geometric_action(from_hamiltonian(h, seed=seed), c)


@dataclass
class RefinementReport:
    """
    Actions of successively doubled discretisations

    Attributes:
        nodes: Node counts m, 2m, 4m, ...
        actions: S at each count
        differences: |S(c_k) - S(c_{k+1})|
        ratios: Consecutive difference ratios (4 for a second-order rule)
    """
    nodes: List[int]
    actions: List[float]
    differences: List[float] = field(default_factory=list)
    ratios: List[float] = field(default_factory=list)

    @property
    def observed_order(self) -> Optional[float]:
        if not self.ratios or self.ratios[-1] <= 0.0:
            return None
        return float(np.log2(self.ratios[-1]))

    @property
    def monotone(self) -> bool:
        return all(b <= a for a, b in zip(self.differences, self.differences[1:]))

    def to_dict(self) -> dict:
        return {'nodes': self.nodes, 'actions': self.actions, 'differences': self.differences,
                'ratios': self.ratios, 'observed_order': self.observed_order,
                'monotone': self.monotone}


def refinement_study(a: LocalAction, param: Callable[[np.ndarray], np.ndarray],
                     base_nodes: int = 16, levels: int = 4) -> RefinementReport:
    """
    Geometric action of a parametric curve at node counts base * 2^k.

    Args:
        a: Local action
        param: Map of an array of parameters in [0, 1] to (k, n) points
        base_nodes: Coarsest node count (>= 2)
        levels: Number of discretisations (>= 2)

    Returns:
        RefinementReport with Richardson ratios
    """
    if base_nodes < 2 or levels < 2:
        raise ConfigError(f"Need base_nodes >= 2 and levels >= 2, got {base_nodes}, {levels}")
    counts, actions = [], []
    for k in range(levels):
        m = (base_nodes - 1) * 2 ** k + 1
        nodes = np.asarray(param(np.linspace(0.0, 1.0, m)), dtype=float).reshape(m, a.dim)
        counts.append(m)
        actions.append(geometric_action(a, Curve(nodes)))
    diffs = [abs(s1 - s0) for s0, s1 in zip(actions, actions[1:])]
    ratios = [d0 / d1 for d0, d1 in zip(diffs, diffs[1:]) if d1 > 0.0]
    report = RefinementReport(counts, actions, diffs, ratios)
    logger.debug("refinement_study: %s", report.to_dict())
    return report
