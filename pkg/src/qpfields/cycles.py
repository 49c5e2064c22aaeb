"""
cycles.py

Planar limit-cycle detection by Poincare returns.

After a transient, a section through the current point orthogonal to b is
set up and the trajectory is followed to its next transversal return. The
return point becomes the new base point until the return map residual is
below tol_cycle. Repelling cycles are found the same way on the reversed
field.
"""

import logging
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from src.qpcore import DivergenceError, PreconditionError
from src.qpcurves import Curve

from .field import FlowField
from .flow import DEFAULT_OPTIONS, FlowOptions, flow

logger = logging.getLogger(__name__)

TOL_CYCLE = 1e-6
MAX_RETURNS = 40
# time flowed before the section is armed, so the start point is not a return
ARM_TIME = 0.01
MIN_SPEED = 1e-8


@dataclass(frozen=True)
class LimitCycleReport:
    """
    Result of a limit-cycle search

    Attributes:
        found: Whether a periodic orbit was confirmed
        sample_point: A point on the cycle (when found)
        period: Period of the cycle (when found)
        residual: |psi(sample_point, period) - sample_point| at the last return
        stability: 'attracting' or 'repelling' (when found)
        reason: Why the search stopped without a cycle
    """
    found: bool
    sample_point: Optional[Tuple[float, ...]] = None
    period: Optional[float] = None
    residual: Optional[float] = None
    stability: Optional[str] = None
    reason: str = ''

    @property
    def point(self) -> Optional[np.ndarray]:
        return None if self.sample_point is None else np.asarray(self.sample_point, dtype=float)

    def to_dict(self) -> dict:
        return {
            'found': self.found,
            'sample_point': None if self.sample_point is None else list(self.sample_point),
            'period': self.period,
            'residual': self.residual,
            'stability': self.stability,
            'reason': self.reason,
        }


def _next_return(f: FlowField, x0: np.ndarray, t_max: float, opts: FlowOptions):
    """First return to the section through x0 orthogonal to b(x0), or None"""
    normal = f.b(x0)
    start = flow(f, x0, ARM_TIME, opts)

    def section(_t, y):
        return float(np.dot(y - x0, normal))
    section.terminal = True
    section.direction = 1

    sol = solve_ivp(lambda _t, y: f.b(y), (0.0, t_max), start, method=opts.method,
                    rtol=opts.rtol, atol=opts.atol, events=[section])
    if sol.status != 1:
        return None
    return sol.y_events[0][0].copy(), float(sol.t_events[0][0]) + ARM_TIME


def _search(f: FlowField, seed: np.ndarray, t_max: float, tol: float,
            opts: FlowOptions) -> LimitCycleReport:
    try:
        x0 = flow(f, seed, 0.5 * t_max, opts)
    except DivergenceError as exc:
        return LimitCycleReport(found=False, reason=f"diverged at t={exc.exit_time:.6g}")
    if np.linalg.norm(f.b(x0)) < MIN_SPEED:
        return LimitCycleReport(found=False, reason="trajectory settled at an equilibrium")
    residual = np.inf
    for _ in range(MAX_RETURNS):
        try:
            hit = _next_return(f, x0, 0.5 * t_max, opts)
        except DivergenceError as exc:
            return LimitCycleReport(found=False, reason=f"diverged at t={exc.exit_time:.6g}")
        if hit is None:
            return LimitCycleReport(found=False, reason="no return to the section")
        x1, period = hit
        residual = float(np.linalg.norm(x1 - x0))
        if residual < tol:
            return LimitCycleReport(found=True, sample_point=tuple(float(v) for v in x1),
                                    period=period, residual=residual)
        x0 = x1
        if np.linalg.norm(f.b(x0)) < MIN_SPEED:
            return LimitCycleReport(found=False, reason="trajectory settled at an equilibrium")
    return LimitCycleReport(found=False, residual=residual, reason="return map did not converge")


def detect_limit_cycle(f: FlowField, seed, t_max: float = 200.0, tol_cycle: float = TOL_CYCLE,
                       include_repelling: bool = True,
                       opts: Optional[FlowOptions] = None) -> LimitCycleReport:
    """
    Search for a periodic orbit reached from seed.

    Args:
        f: Planar drift field
        seed: Start point
        t_max: Time budget (half for the transient, half per return)
        tol_cycle: Return residual accepted as closed
        include_repelling: Also search the reversed field
        opts: Integrator options

    Returns:
        LimitCycleReport (found=False on failure; never raises for a missing cycle)

    Raises:
        PreconditionError: Field is not planar
    """
    if f.dim != 2:
        raise PreconditionError(f"Limit-cycle detection is planar only, got dim={f.dim}")
    opts = opts or DEFAULT_OPTIONS
    seed = np.asarray(seed, dtype=float).reshape(2)
    report = _search(f, seed, t_max, tol_cycle, opts)
    if report.found:
        return replace(report, stability='attracting')
    if include_repelling:
        back = _search(f.reversed(), seed, t_max, tol_cycle, opts)
        if back.found:
            return replace(back, stability='repelling')
    logger.debug("No limit cycle from %s: %s", seed.tolist(), report.reason)
    return report


def trace_cycle(f: FlowField, report: LimitCycleReport, nodes: int = 400,
                opts: Optional[FlowOptions] = None) -> Curve:
    """
    One period of a detected cycle as a closed polyline.

    Raises:
        PreconditionError: The report has no cycle
    """
    if not report.found:
        raise PreconditionError("trace_cycle needs a found cycle")
    opts = opts or DEFAULT_OPTIONS
    x0 = report.point
    times = np.linspace(0.0, report.period, nodes)
    sol = solve_ivp(lambda _t, y: f.b(y), (0.0, report.period), x0, method=opts.method,
                    t_eval=times, rtol=opts.rtol, atol=opts.atol)
    pts = sol.y.T.copy()
    pts[-1] = pts[0]
    return Curve(pts)
