"""
distance.py

Flowline distances to attractors and repellors.

stable_distance(w) is the arclength of the flowline from w to an attractor:
the flow is integrated with an arclength component until it enters a small
ball of radius r_loc around the equilibrium, and the remaining piece is
closed with the linearised flow x' = J (x - eq). The tail error is
O(r_loc^2). unstable_distance applies the same to the reversed field.
"""

import logging
from typing import Optional

import numpy as np
from scipy.integrate import quad, solve_ivp

from src.qpcore import Box, NotInBasinError, PreconditionError, make_rng

from .equilibria import Equilibrium, EquilibriumKind
from .field import FlowField
from .flow import DEFAULT_OPTIONS, FlowOptions

logger = logging.getLogger(__name__)

R_LOC_FRACTION = 1e-4
DEFAULT_T_MAX = 1e3


def linear_tail_length(J: np.ndarray, v: np.ndarray) -> float:
    """
    Arclength of the linear flow x' = J x from v to the origin.

    Integrates |J e^{Jt} v| over [0, inf) through the eigen-decomposition of
    J; falls back to |v| * |J| / min |Re lambda| when J is not diagonalisable
    to working accuracy.
    """
    v = np.asarray(v, dtype=float)
    nv = float(np.linalg.norm(v))
    if nv == 0.0:
        return 0.0
    lam, vecs = np.linalg.eig(J)
    rate = float(np.min(np.abs(np.real(lam))))
    if rate <= 0.0:
        raise PreconditionError("Linear tail needs eigenvalues with nonzero real part")
    if np.linalg.cond(vecs) > 1e10:
        return nv * float(np.linalg.norm(J, 2)) / rate
    coeff = np.linalg.solve(vecs, v.astype(complex))

    def speed(t):
        return float(np.linalg.norm(np.real(vecs @ (lam * np.exp(lam * t) * coeff))))

    horizon = 40.0 / rate
    value, _ = quad(speed, 0.0, horizon, limit=200)
    return float(value)


def _distance_to(f: FlowField, target: np.ndarray, J: np.ndarray, w: np.ndarray,
                 r_loc: float, t_max: float, box: Optional[Box], opts: FlowOptions) -> float:
    n = f.dim
    d0 = float(np.linalg.norm(w - target))
    if d0 <= r_loc:
        return linear_tail_length(J, w - target)

    def rhs(_t, y):
        v = f.b(y[:n])
        return np.append(v, np.linalg.norm(v))

    def arrive(_t, y):
        return float(np.linalg.norm(y[:n] - target)) - r_loc
    arrive.terminal = True
    arrive.direction = -1

    if box is not None:
        lo, hi = box.lo, box.hi

        def escape(_t, y):
            return float(np.min(np.minimum(y[:n] - lo, hi - y[:n])))
    else:
        def escape(_t, y):
            return opts.bound - float(np.linalg.norm(y[:n]))
    escape.terminal = True

    sol = solve_ivp(rhs, (0.0, t_max), np.append(w, 0.0), method=opts.method,
                    rtol=opts.rtol, atol=opts.atol, events=[arrive, escape])
    if sol.status == 1 and len(sol.t_events[0]):
        end = sol.y_events[0][0]
        return float(end[n]) + linear_tail_length(J, end[:n] - target)
    raise NotInBasinError(
        f"Flowline from {w.tolist()} did not reach {target.tolist()} within t_max={t_max:g}",
        point=w,
    )


def stable_distance(f: FlowField, eq: Equilibrium, w, scale: float = 1.0,
                    t_max: float = DEFAULT_T_MAX, box: Optional[Box] = None,
                    opts: Optional[FlowOptions] = None) -> float:
    """
    Length of the flowline from w to an attractor.

    Args:
        f: Drift field
        eq: Attractor
        w: Start point
        scale: Length scale; the closing ball has radius 1e-4 * scale
        t_max: Time budget for reaching the ball
        box: Escape region (default |x| <= opts.bound)
        opts: Integrator options

    Returns:
        f_s(w) >= |w - eq|

    Raises:
        PreconditionError: eq is not an attractor
        NotInBasinError: w escaped or did not approach eq within t_max
    """
    if eq.kind != EquilibriumKind.ATTRACTOR:
        raise PreconditionError(f"stable_distance needs an attractor, got {eq.kind.value}")
    w = np.asarray(w, dtype=float).reshape(f.dim)
    return _distance_to(f, eq.point, f.jacobian(eq.point), w, R_LOC_FRACTION * scale,
                        t_max, box, opts or DEFAULT_OPTIONS)


def unstable_distance(f: FlowField, eq: Equilibrium, w, scale: float = 1.0,
                      t_max: float = DEFAULT_T_MAX, box: Optional[Box] = None,
                      opts: Optional[FlowOptions] = None) -> float:
    """Length of the backward flowline from w to a repellor (see stable_distance)"""
    if eq.kind != EquilibriumKind.REPELLOR:
        raise PreconditionError(f"unstable_distance needs a repellor, got {eq.kind.value}")
    w = np.asarray(w, dtype=float).reshape(f.dim)
    g = f.reversed()
    return _distance_to(g, eq.point, g.jacobian(eq.point), w, R_LOC_FRACTION * scale,
                        t_max, box, opts or DEFAULT_OPTIONS)


def equilibrium_distance(f: FlowField, eq: Equilibrium, w, **kwargs) -> float:
    """f_s for attractors, f_u for repellors"""
    if eq.kind == EquilibriumKind.REPELLOR:
        return unstable_distance(f, eq, w, **kwargs)
    return stable_distance(f, eq, w, **kwargs)


def linear_bound_constant(f: FlowField, eq: Equilibrium, radius: float, samples: int = 64,
                          seed: Optional[int] = None, **kwargs) -> float:
    """
    Sampled estimate of D with f_s(w) <= D |w - eq| on a ball around eq.

    Args:
        f: Drift field
        eq: Attractor or repellor
        radius: Ball radius (inside the basin)
        samples: Number of random points in the ball
        seed: RNG seed

    Returns:
        Largest observed ratio f_s(w) / |w - eq| (>= 1)
    """
    rng = make_rng(seed)
    dirs = rng.standard_normal((samples, f.dim))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    radii = radius * rng.random(samples) ** (1.0 / f.dim)
    worst = 1.0
    for d, r in zip(dirs, radii):
        if r <= 0.0:
            continue
        w = eq.point + r * d
        worst = max(worst, equilibrium_distance(f, eq, w, **kwargs) / r)
    logger.debug("linear_bound_constant: D=%.6g over %d samples", worst, samples)
    return worst
