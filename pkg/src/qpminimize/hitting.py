"""
hitting.py

Diagnostics of computed minimizers: where they meet a separatrix, where
their nodes bunch up, and how often they wind around a centre.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from src.qpactions import LocalAction
from src.qpcore import PreconditionError, pairwise_sum
from src.qpcurves import Curve, as_curve, curve_length, point_to_polyline_distance
from src.qpfields import FlowField
from src.qpfunctional import chord_actions

from .problem import MinimizeResult

logger = logging.getLogger(__name__)

PASS_TOL = 0.05
SPIKE_RATIO = 1e-3
SPEED_RATIO = 1e-3
NEAR_FRACTION = 1e-2


def _curve_of(r: Union[MinimizeResult, Curve]) -> Curve:
    return r.curve if isinstance(r, MinimizeResult) else as_curve(r)


def winding_number(c: Curve, center) -> float:
    """
    Total turning of c about a centre, in turns.

    Raises:
        PreconditionError: Not planar, or a node sits on the centre
    """
    c = as_curve(c)
    if c.dim != 2:
        raise PreconditionError(f"Winding numbers are planar, got dim={c.dim}")
    rel = c.nodes - np.asarray(center, dtype=float).reshape(2)
    if np.any(np.linalg.norm(rel, axis=1) == 0.0):
        raise PreconditionError("A node coincides with the winding centre")
    angles = np.unwrap(np.arctan2(rel[:, 1], rel[:, 0]))
    return float((angles[-1] - angles[0]) / (2.0 * np.pi))


@dataclass
class HittingReport:
    """
    First and last hitting points of a curve on a separatrix

    Attributes:
        crossed: Whether any node came within dist_tol of the separatrix
        first_index / last_index: Node indices of the hitting points
        first_point / last_point: The hitting points
        first_distance / last_distance: Distances to the nearest critical point
        first_speed / last_speed: |b| at the hitting points
        dist_tol: Node-to-separatrix distance counted as a hit
        pass_tol: Largest accepted distance to a critical point
        downhill_action: Action after the last hitting point (when an action is given)
        total_action: Action of the whole curve (when an action is given)
    """
    crossed: bool
    dist_tol: float
    pass_tol: float
    first_index: Optional[int] = None
    last_index: Optional[int] = None
    first_point: Optional[List[float]] = None
    last_point: Optional[List[float]] = None
    first_distance: float = float('inf')
    last_distance: float = float('inf')
    first_speed: Optional[float] = None
    last_speed: Optional[float] = None
    downhill_action: Optional[float] = None
    total_action: Optional[float] = None

    @property
    def passed(self) -> bool:
        return self.crossed and self.first_distance < self.pass_tol and self.last_distance < self.pass_tol

    @property
    def downhill_fraction(self) -> Optional[float]:
        if self.downhill_action is None or not self.total_action:
            return None
        return self.downhill_action / self.total_action

    def to_dict(self) -> Dict[str, Any]:
        def finite(v):
            return None if v is None or not np.isfinite(v) else float(v)
        return {
            'crossed': self.crossed,
            'passed': self.passed,
            'reason': '' if self.crossed else 'no crossing',
            'dist_tol': self.dist_tol,
            'pass_tol': self.pass_tol,
            'first_index': self.first_index,
            'last_index': self.last_index,
            'first_point': self.first_point,
            'last_point': self.last_point,
            'first_distance': finite(self.first_distance),
            'last_distance': finite(self.last_distance),
            'first_speed': self.first_speed,
            'last_speed': self.last_speed,
            'downhill_action': self.downhill_action,
            'total_action': self.total_action,
            'downhill_fraction': self.downhill_fraction,
        }


def hitting_report(r: Union[MinimizeResult, Curve], f: FlowField, separatrix: Curve,
                   crit_points: Sequence, dist_tol: Optional[float] = None, pass_tol: float = PASS_TOL,
                   action: Optional[LocalAction] = None) -> HittingReport:
    """
    Where a minimizer meets a separatrix.

    Args:
        r: Minimization result (or a bare curve)
        f: Drift field
        separatrix: Traced separatrix polyline
        crit_points: Critical points the hits are compared against
        dist_tol: Hit distance (default: mean chord length of the curve)
        pass_tol: Pass threshold on both distances
        action: When given, the action after the last hit is reported

    Returns:
        HittingReport; crossed=False when no node comes close enough
    """
    c = _curve_of(r)
    tol = float(np.mean(c.chord_lengths())) if dist_tol is None else float(dist_tol)
    d = point_to_polyline_distance(c.nodes, separatrix)
    hits = np.flatnonzero(d < tol)
    if hits.size == 0:
        logger.info("hitting_report: curve stays %.3g away from the separatrix", float(np.min(d)))
        return HittingReport(False, tol, pass_tol)
    crit = np.atleast_2d(np.asarray(crit_points, dtype=float)) if len(crit_points) else np.empty((0, c.dim))

    def to_crit(x):
        return float(np.min(np.linalg.norm(crit - x, axis=1))) if crit.shape[0] else float('inf')

    first, last = int(hits[0]), int(hits[-1])
    report = HittingReport(
        True, tol, pass_tol, first, last,
        c.nodes[first].tolist(), c.nodes[last].tolist(),
        to_crit(c.nodes[first]), to_crit(c.nodes[last]),
        f.speed(c.nodes[first]), f.speed(c.nodes[last]),
    )
    if action is not None:
        values = chord_actions(action, c)
        report.total_action = pairwise_sum(values)
        report.downhill_action = pairwise_sum(values[last:])
    logger.debug("hitting_report: %s", report.to_dict())
    return report


@dataclass
class SpikeReport:
    """
    Node-density spikes of a curve and their distance to near-critical points

    Attributes:
        spikes: Chord indices with length < spike_ratio * mean chord
        distances: Distance of each spike midpoint to the nearest near-critical point
        near_tol: Largest distance accepted
        near_critical: Points where |b| is small (listed equilibria and nodes)
    """
    spikes: List[int]
    distances: List[float]
    near_tol: float
    near_critical: List[List[float]] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return all(d <= self.near_tol for d in self.distances)

    def to_dict(self) -> Dict[str, Any]:
        return {'spikes': self.spikes, 'distances': [d if np.isfinite(d) else None for d in self.distances],
                'near_tol': self.near_tol, 'near_critical': self.near_critical,
                'consistent': self.consistent}


def density_spikes(r: Union[MinimizeResult, Curve], f: FlowField, equilibria: Sequence = (),
                   spike_ratio: float = SPIKE_RATIO, speed_ratio: float = SPEED_RATIO,
                   scale: Optional[float] = None) -> SpikeReport:
    """
    Chord-length spikes and whether they sit next to near-critical points.

    For a MinimizeResult the last iterate before redistribution is
    inspected, since redistributed curves have equal chords by construction.

    Args:
        r: Result or curve
        f: Drift field
        equilibria: Known critical points (Equilibrium objects or points)
        spike_ratio: Chords shorter than this fraction of the mean are spikes
        speed_ratio: Nodes with |b| below this fraction of the max are near-critical
        scale: Length scale of the proximity test (default: curve length)
    """
    if isinstance(r, MinimizeResult):
        c = r.raw_curve if r.raw_curve is not None else r.curve
    else:
        c = as_curve(r)
    lengths = c.chord_lengths()
    spikes = np.flatnonzero(lengths < spike_ratio * float(np.mean(lengths)))
    speeds = np.linalg.norm(f.b_batch(c.nodes), axis=1)
    slow = c.nodes[speeds < speed_ratio * float(np.max(speeds))] if speeds.size else np.empty((0, c.dim))
    eq_points = [np.asarray(getattr(e, 'point', e), dtype=float).reshape(c.dim) for e in equilibria]
    near = np.vstack([slow] + [p[None, :] for p in eq_points]) if eq_points else slow
    mids = c.midpoints()[spikes]
    if near.shape[0]:
        distances = [float(np.min(np.linalg.norm(near - m, axis=1))) for m in mids]
    else:
        distances = [float('inf')] * len(mids)
    tol = NEAR_FRACTION * (curve_length(c) if scale is None else scale)
    return SpikeReport([int(k) for k in spikes], distances, tol, near.tolist())
