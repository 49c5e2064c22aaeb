"""
seed.py

Initial curves and the confinement radius of gradient drifts.
"""

import logging
from typing import Callable, Optional, Sequence

import numpy as np

from src.qpcore import Box, ConfigError, unit_directions
from src.qpcurves import ArcCurve, Curve, reparameterize_arclength
from src.qpfields import Equilibrium, EquilibriumKind, FlowField, find_equilibria

from .problem import MinimizeProblem
from .sets import SetKind

logger = logging.getLogger(__name__)

SEARCH_PAD = 0.25
CONFINEMENT_DIRECTIONS = 64


def _anchors(p: MinimizeProblem):
    start, end = p.start_set, p.end_set
    if start.kind != SetKind.POINT and end.kind == SetKind.POINT:
        a = start.representative(toward=end.anchor)
    else:
        a = start.representative()
    return a, end.representative(toward=a)


def _search_box(p: MinimizeProblem, a: np.ndarray, b: np.ndarray) -> Box:
    if p.box is not None:
        return p.box
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    pad = SEARCH_PAD * max(float(np.linalg.norm(b - a)), 1.0)
    return Box.from_bounds(lo - pad, hi + pad)


def seed_curve(p: MinimizeProblem, f: Optional[FlowField] = None,
               equilibria: Optional[Sequence[Equilibrium]] = None) -> ArcCurve:
    """
    Initial curve of a minimization.

    Without a field this is the straight segment between a point of the
    start set and the nearest point of the end set. With a field, the
    saddle closest to the segment midpoint is inserted and the seed runs
    start -> saddle -> end.

    Args:
        p: Problem
        f: Drift field (optional)
        equilibria: Known equilibria; searched in the problem box when omitted

    Returns:
        ArcCurve with p.nodes nodes
    """
    a, b = _anchors(p)
    corners = [a, b]
    if f is not None:
        if f.dim != p.dim:
            raise ConfigError(f"Field dimension {f.dim} != problem dimension {p.dim}")
        eqs = list(equilibria) if equilibria is not None else find_equilibria(f, _search_box(p, a, b))
        saddles = [e for e in eqs if e.kind == EquilibriumKind.SADDLE]
        if saddles:
            mid = 0.5 * (a + b)
            s = min(saddles, key=lambda e: float(np.linalg.norm(e.point - mid))).point
            if np.linalg.norm(s - a) > 0.0 and np.linalg.norm(s - b) > 0.0:
                corners = [a, s, b]
                logger.debug("seed_curve: through saddle %s", s.tolist())
    return reparameterize_arclength(Curve(np.vstack(corners)), p.nodes)


def confinement_radius(V: Callable[[np.ndarray], np.ndarray], start_points, seed_action: float,
                       radii: Sequence[float], center=None,
                       directions: int = CONFINEMENT_DIRECTIONS) -> Optional[float]:
    """
    Smallest sampled R with min_{|x - center| = R} V - max_{A1} V >= seed_action.

    For gradient drifts b = -grad V, curves leaving the ball of radius R
    cost at least twice the potential gap, so minimizing curves stay inside
    it once a seed with that action is known.

    Args:
        V: Batched potential
        start_points: Samples of the start set, shape (k, n)
        seed_action: Action of any admissible curve
        radii: Candidate radii (tried in increasing order)
        center: Centre of the spheres (origin by default)
        directions: Samples per sphere

    Returns:
        The radius, or None when no candidate qualifies
    """
    pts = np.atleast_2d(np.asarray(start_points, dtype=float))
    n = pts.shape[1]
    c = np.zeros(n) if center is None else np.asarray(center, dtype=float).reshape(n)
    top = float(np.max(V(pts)))
    dirs = unit_directions(n, directions)
    for R in sorted(float(r) for r in radii):
        if R <= 0.0:
            raise ConfigError(f"Radii must be positive, got {R}")
        if float(np.min(V(c + R * dirs))) - top >= seed_action:
            return R
    return None
