"""
manifolds2d.py

Stable and unstable manifolds of a planar saddle, traced as four flowline
branches and resampled uniformly in arclength.
"""

import logging
from typing import Iterator, NamedTuple, Optional

import numpy as np
from scipy.integrate import solve_ivp

from src.qpcore import ConfigError, DegenerateSaddleError, PreconditionError
from src.qpcurves import ArcCurve, Curve, concat, reverse

from .equilibria import Equilibrium, EquilibriumKind
from .field import FlowField
from .flow import DEFAULT_OPTIONS, FlowOptions

logger = logging.getLogger(__name__)

SEED_FRACTION = 1e-6
PARALLEL_TOL = 1e-8
FINE_SAMPLES = 4001


class InvariantManifolds(NamedTuple):
    """Four branches leaving the saddle, each starting at the saddle itself"""
    stable_plus: ArcCurve
    stable_minus: ArcCurve
    unstable_plus: ArcCurve
    unstable_minus: ArcCurve

    def branches(self) -> Iterator[ArcCurve]:
        return iter(self)


def _oriented(v: np.ndarray) -> np.ndarray:
    """Unit vector whose first nonzero component is positive"""
    v = v / np.linalg.norm(v)
    lead = v[np.flatnonzero(np.abs(v) > 1e-12)[0]]
    return v if lead > 0 else -v


def saddle_directions(f: FlowField, saddle: Equilibrium):
    """
    Unit stable and unstable eigenvectors of a planar saddle.

    Raises:
        DegenerateSaddleError: Complex or (nearly) parallel eigenvectors
    """
    lam, vecs = np.linalg.eig(f.jacobian(saddle.point))
    if np.any(np.abs(np.imag(lam)) > 0.0) or np.any(np.abs(np.imag(vecs)) > 0.0):
        raise DegenerateSaddleError(f"Saddle at {saddle.location} has complex eigenvalues {lam}")
    lam, vecs = np.real(lam), np.real(vecs)
    i_s, i_u = int(np.argmin(lam)), int(np.argmax(lam))
    if not (lam[i_s] < 0.0 < lam[i_u]):
        raise DegenerateSaddleError(f"Eigenvalues {lam} do not form a saddle")
    v_s = _oriented(vecs[:, i_s])
    v_u = _oriented(vecs[:, i_u])
    if abs(float(np.linalg.det(np.column_stack([v_s, v_u])))) < PARALLEL_TOL:
        raise DegenerateSaddleError(f"Saddle at {saddle.location} has parallel eigenvectors")
    return v_s, v_u


def _trace_branch(f: FlowField, origin: np.ndarray, seed: np.ndarray, direction: int,
                  arc_budget: float, nodes: int, t_max: float, opts: FlowOptions) -> ArcCurve:
    n = f.dim
    delta = float(np.linalg.norm(seed - origin))
    remaining = arc_budget - delta

    def rhs(_t, y):
        v = f.b(y[:n])
        return np.append(v, np.linalg.norm(v))

    def budget(_t, y):
        return remaining - abs(float(y[n]))
    budget.terminal = True

    def stall(_t, y):
        return float(np.linalg.norm(f.b(y[:n]))) - opts.stall_tol
    stall.terminal = True
    stall.direction = -1

    def escape(_t, y):
        return opts.bound - float(np.linalg.norm(y[:n]))
    escape.terminal = True

    sol = solve_ivp(rhs, (0.0, direction * t_max), np.append(seed, 0.0), method=opts.method,
                    rtol=opts.rtol, atol=opts.atol, events=[budget, stall, escape], dense_output=True)
    t_end = float(sol.t[-1])
    fine = sol.sol(np.linspace(0.0, t_end, FINE_SAMPLES))
    s = np.concatenate([[0.0], delta + np.abs(fine[n])])
    pts = np.vstack([origin[None, :], fine[:n].T])
    keep = np.concatenate([[True], np.diff(s) > 0])
    s, pts = s[keep], pts[keep]
    targets = np.linspace(0.0, s[-1], nodes)
    out = np.stack([np.interp(targets, s, pts[:, k]) for k in range(n)], axis=-1)
    if len(sol.t_events[1]) or len(sol.t_events[2]):
        logger.info("Branch from %s stopped early at arclength %.6g", seed.tolist(), s[-1])
    return ArcCurve(out, targets)


def trace_invariant_manifolds_2d(f: FlowField, saddle: Equilibrium, arc_budget: float,
                                 scale: float = 1.0, nodes: int = 400, t_max: float = 1e3,
                                 opts: Optional[FlowOptions] = None) -> InvariantManifolds:
    """
    Trace the four invariant-manifold branches of a planar saddle.

    Each branch is seeded at saddle +/- delta * eigenvector (delta = 1e-6 *
    scale) and integrated forward (unstable) or backward (stable) until it
    has covered arc_budget of arclength, stalls at an equilibrium, or leaves
    the bound.

    Args:
        f: Planar drift field
        saddle: Saddle equilibrium
        arc_budget: Arclength per branch
        scale: Length scale for the seed offset
        nodes: Nodes per branch
        t_max: Time budget per branch
        opts: Integrator options

    Returns:
        InvariantManifolds; each branch's cumulative_length ends at its arclength

    Raises:
        PreconditionError: Not planar or not a saddle
        DegenerateSaddleError: Complex or parallel eigenvectors
    """
    if f.dim != 2:
        raise PreconditionError(f"Invariant manifolds are traced in 2-D only, got dim={f.dim}")
    if saddle.kind != EquilibriumKind.SADDLE:
        raise PreconditionError(f"Equilibrium at {saddle.location} is {saddle.kind.value}, not a saddle")
    if arc_budget <= 0:
        raise ConfigError(f"arc_budget must be positive, got {arc_budget}")
    opts = opts or DEFAULT_OPTIONS
    v_s, v_u = saddle_directions(f, saddle)
    delta = SEED_FRACTION * scale
    x0 = saddle.point
    return InvariantManifolds(
        stable_plus=_trace_branch(f, x0, x0 + delta * v_s, -1, arc_budget, nodes, t_max, opts),
        stable_minus=_trace_branch(f, x0, x0 - delta * v_s, -1, arc_budget, nodes, t_max, opts),
        unstable_plus=_trace_branch(f, x0, x0 + delta * v_u, 1, arc_budget, nodes, t_max, opts),
        unstable_minus=_trace_branch(f, x0, x0 - delta * v_u, 1, arc_budget, nodes, t_max, opts),
    )


def separatrix_from_saddle(m: InvariantManifolds) -> Curve:
    """Stable manifold as one curve: minus branch reversed, then plus branch"""
    return concat(reverse(m.stable_minus), m.stable_plus)
