"""
coordinates.py

Flow coordinates x = psi(z(x), t(x)) relative to an admissible manifold and
the evolution of a manifold along a rescaled flow.
"""

import logging
from typing import Callable, Optional, Tuple, Union

import numpy as np

from src.qpcore import Box, DivergenceError, NotReachableError
from src.qpfields import DEFAULT_OPTIONS, FlowField, FlowOptions, first_crossing, flow

from .admissible import check_admissible, zero_set_points
from .manifold import AdmissibleManifold, Located

logger = logging.getLogger(__name__)

T_MAX = 1e3
ON_MANIFOLD_TOL = 1e-10
EVOLVE_PAD = 0.1


def _search_order(value: float):
    # f_M > 0 lies downstream of M for an oriented manifold, so look backward first
    return (-1, 1) if value > 0.0 else (1, -1)


def locate(m: AdmissibleManifold, f: FlowField, x, t_max: float = T_MAX,
           opts: Optional[FlowOptions] = None, max_arclength: Optional[float] = None,
           level_tol: float = ON_MANIFOLD_TOL) -> Optional[Located]:
    """
    Foot point, time and arclength of x relative to M, or None.

    Both time directions are searched; a direction whose trajectory
    diverges counts as having no crossing. Manifolds carrying a locator for
    f skip the event search.
    """
    opts = opts or DEFAULT_OPTIONS
    x = np.asarray(x, dtype=float).reshape(f.dim)
    if m.locator is not None and m.locator.field is f:
        return m.locator.find(x, t_max, opts, max_arclength)
    value = m.value(x)
    if abs(value) < level_tol:
        return Located(x.copy(), 0.0, 0.0)
    for direction in _search_order(value):
        try:
            hit = first_crossing(f, x, [m.value], t_max, direction=direction, opts=opts,
                                 level_tol=level_tol, max_arclength=max_arclength)
        except DivergenceError as exc:
            logger.debug("locate: direction %+d diverged at t=%.4g", direction, exc.exit_time)
            continue
        if hit is not None:
            return Located(hit.point, -hit.time, hit.arclength)
    return None


def flow_coordinates(m: AdmissibleManifold, f: FlowField, x, t_max: float = T_MAX,
                     opts: Optional[FlowOptions] = None) -> Tuple[np.ndarray, float]:
    """
    (z(x), t(x)) with z on M and psi(z, t) = x.

    Args:
        m: Admissible manifold
        f: Drift field
        x: Point in psi(M, R)
        t_max: Time budget in each direction
        opts: Integrator options

    Returns:
        (z, t); (x, 0.0) when x already lies on M

    Raises:
        NotReachableError: No crossing within t_max in either direction
    """
    found = locate(m, f, x, t_max, opts)
    if found is None:
        raise NotReachableError(
            f"No crossing of manifold '{m.id}' within |t| <= {t_max:g}", point=np.asarray(x, dtype=float))
    return found.z, found.t


def _constant(value: float) -> Callable[[np.ndarray], float]:
    return lambda x: value


def evolve_manifold(m: AdmissibleManifold, f: FlowField, beta: Union[float, Callable[[np.ndarray], float]],
                    T: float, opts: Optional[FlowOptions] = None, samples: int = 32,
                    seed: Optional[int] = 0) -> AdmissibleManifold:
    """
    Move M along the flow of beta * b for time T.

    f_{M'}(x) = f_M(psi_beta(x, -T)). The bounding box is rebuilt around the
    transported zero-set samples and the result is re-checked against f; a
    failed check is logged, not raised.

    Raises:
        DivergenceError: The rescaled flow blew up
    """
    opts = opts or DEFAULT_OPTIONS
    weight = _constant(float(beta)) if np.isscalar(beta) else beta
    g = f.scaled(weight)
    source, T = m, float(T)

    def level(X):
        return np.array([source.value(flow(g, x, -T, opts)) for x in X])

    moved = np.array([flow(g, z, T, opts) for z in zero_set_points(m, samples, seed)])
    pad = EVOLVE_PAD * (m.bounding_box.hi - m.bounding_box.lo)
    box = Box.from_bounds(moved.min(axis=0) - pad, moved.max(axis=0) + pad)
    evolved = AdmissibleManifold(
        dim=m.dim, level=level, bounding_box=box, name=f"evolved({m.name})",
        params={'source': m.to_dict(), 'T': T}, compact=m.compact,
        manifold_id=f"{m.id}@T={T:g}", h_grad=m.h_grad,
    )
    report = check_admissible(evolved, f, samples, seed)
    if report.passed:
        evolved = evolved.oriented(report.orientation)
    else:
        logger.warning("evolve_manifold: '%s' is not admissible after T=%g (worst margin %.3g)",
                       m.id, T, report.worst_margin)
    return evolved
