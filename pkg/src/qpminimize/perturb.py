"""
perturb.py

Bending the end of a curve into the flow.

phi_eps(alpha) = phi(alpha) + eps (alpha - alpha0) b(phi(alpha)) for
alpha >= alpha0 moves the end point along b(end) and leaves the curve
before alpha0 untouched. For actions with H(x, 0) = 0 this lowers the
action whenever the end segment is not itself a flowline.
"""

import logging
from typing import List, Optional

import numpy as np

from src.qpactions import LocalAction
from src.qpcore import Box, ConfigError, PreconditionError, make_rng
from src.qpcurves import Curve, as_curve, curve_length, segment
from src.qpfields import FlowField
from src.qpfunctional import geometric_action

logger = logging.getLogger(__name__)

BEND_EPS = 1e-4
MIN_END_SPEED = 1e-6
SEGMENT_LENGTH = 0.3
MIN_SEGMENT_SPEED = 0.3
MAX_SEGMENT_COSINE = 0.7
SEGMENT_ATTEMPTS = 1000


def _fractions(c: Curve) -> np.ndarray:
    cum = c.cumulative()
    return cum / cum[-1]


def bend_end_family(c: Curve, f: FlowField, alpha0: float, eps: float) -> Curve:
    """
    Member eps of the bent family of c.

    Args:
        c: Curve (alpha is its normalised arclength)
        f: Drift field
        alpha0: Start of the bend, 0 <= alpha0 < 1
        eps: Bend strength; the end point moves by eps (1 - alpha0) b(end)

    Raises:
        ConfigError: alpha0 outside [0, 1)
    """
    if not 0.0 <= alpha0 < 1.0:
        raise ConfigError(f"alpha0 must lie in [0, 1), got {alpha0}")
    c = as_curve(c)
    if eps == 0.0:
        return Curve(c.nodes, degenerate=c.degenerate)
    weight = np.maximum(_fractions(c) - alpha0, 0.0)
    nodes = c.nodes + eps * weight[:, None] * f.b_batch(c.nodes)
    return Curve(nodes, degenerate=True)


def descent_derivative(c: Curve, a: LocalAction, f: FlowField, alpha0: float,
                       eps: float = None) -> float:
    """
    d/d eps S(bent curve) at eps = 0 by a central difference.

    Args:
        c: Curve ending at a non-critical point
        a: Local action
        f: Drift field
        alpha0: Start of the bend
        eps: Difference step (default 1e-4 times the curve length)

    Returns:
        (S(c_{+eps}) - S(c_{-eps})) / (2 eps); negative for curves whose end
        segment is not a flowline under actions with H(x, 0) = 0

    Raises:
        PreconditionError: |b(end)| <= 1e-6
    """
    c = as_curve(c)
    speed = f.speed(c.end)
    if speed <= MIN_END_SPEED:
        raise PreconditionError(f"Curve ends at a critical point ({c.end.tolist()}, |b| = {speed:.3e})")
    step = BEND_EPS * curve_length(c) if eps is None else float(eps)
    plus = geometric_action(a, bend_end_family(c, f, alpha0, step))
    minus = geometric_action(a, bend_end_family(c, f, alpha0, -step))
    value = (plus - minus) / (2.0 * step)
    logger.debug("descent_derivative: alpha0=%g eps=%.3g -> %.12g", alpha0, step, value)
    return value


def off_flow_segments(f: FlowField, box: Box, count: int, seed: Optional[int] = None,
                      length: float = SEGMENT_LENGTH, min_speed: float = MIN_SEGMENT_SPEED,
                      max_cos: float = MAX_SEGMENT_COSINE, nodes: int = 101) -> List[Curve]:
    """
    Random straight end segments that do not follow the flow.

    Each segment ends at a uniform point of box where |b| >= min_speed and
    arrives along a uniform direction whose cosine with b(end) is at most
    max_cos.

    Raises:
        ConfigError: count < 1, non-positive length, or too few qualifying
            samples within the attempt budget
    """
    if count < 1 or length <= 0.0:
        raise ConfigError(f"count and length must be positive, got {count}, {length}")
    rng = make_rng(seed)
    out: List[Curve] = []
    for _ in range(SEGMENT_ATTEMPTS * count):
        end = rng.uniform(box.lo, box.hi)
        b = f.b(end)
        speed = float(np.linalg.norm(b))
        if speed < min_speed:
            continue
        d = rng.standard_normal(box.dim)
        d /= np.linalg.norm(d)
        if float(np.dot(d, b)) / speed > max_cos:
            continue
        out.append(segment(end - length * d, end, nodes))
        if len(out) == count:
            return out
    raise ConfigError(f"Only {len(out)} of {count} off-flow segments found in {box.to_dict()}")
