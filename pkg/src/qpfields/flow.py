"""
flow.py

Numerical flow psi(x, t) of x' = b(x) and first crossings of level sets.

All integration goes through scipy's DOP853 pair with a terminal escape
event at |x| = bound; escaping raises DivergenceError carrying the exit
time instead of rescaling the field near the boundary.
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from src.qpcore import ConfigError, DivergenceError
from src.qpcurves import Curve

from .field import FlowField

logger = logging.getLogger(__name__)

LevelFn = Callable[[np.ndarray], float]


@dataclass(frozen=True)
class FlowOptions:
    """
    Integrator options

    Attributes:
        rtol: Relative local error tolerance
        atol: Absolute local error tolerance
        bound: State norm treated as blow-up
        method: solve_ivp method name
        stall_tol: Speed below which a trajectory counts as stalled
    """
    rtol: float = 1e-10
    atol: float = 1e-10
    bound: float = 1e6
    method: str = 'DOP853'
    stall_tol: float = 1e-10

    def __post_init__(self):
        if self.rtol <= 0 or self.atol <= 0 or self.bound <= 0:
            raise ConfigError(f"Tolerances and bound must be positive: {self}")

    def to_dict(self) -> dict:
        return {'rtol': self.rtol, 'atol': self.atol, 'bound': self.bound,
                'method': self.method, 'stall_tol': self.stall_tol}


DEFAULT_OPTIONS = FlowOptions()

# looser options for sweeps over many points
SWEEP_OPTIONS = FlowOptions(rtol=1e-8, atol=1e-10)


def _escape_event(n: int, bound: float):
    def escape(t, y):
        return bound - float(np.linalg.norm(y[:n]))
    escape.terminal = True
    return escape


def _raise_divergence(sol, n: int, bound: float):
    if sol.status == 1 and len(sol.t_events[0]):
        t_exit = float(sol.t_events[0][0])
        state = sol.y_events[0][0][:n]
    else:
        t_exit = float(sol.t[-1])
        state = sol.y[:n, -1]
    raise DivergenceError(
        f"Flow left |x| <= {bound:g} at t = {t_exit:.6g} ({sol.message})",
        exit_time=t_exit, state=state,
    )


def flow(f: FlowField, x, t: float, opts: Optional[FlowOptions] = None) -> np.ndarray:
    """
    Solve x' = b(x) from x for time t (t may be negative).

    Args:
        f: Drift field
        x: Initial point
        t: Integration time
        opts: Integrator options

    Returns:
        psi(x, t); exactly x when t == 0

    Raises:
        DivergenceError: State norm exceeded opts.bound or the integrator failed
    """
    opts = opts or DEFAULT_OPTIONS
    x = np.asarray(x, dtype=float).reshape(f.dim)
    if not np.isfinite(t):
        raise ConfigError(f"Flow time must be finite, got {t}")
    if t == 0.0:
        return x.copy()
    sol = solve_ivp(lambda _t, y: f.b(y), (0.0, float(t)), x, method=opts.method,
                    rtol=opts.rtol, atol=opts.atol, events=[_escape_event(f.dim, opts.bound)])
    if sol.status != 0:
        _raise_divergence(sol, f.dim, opts.bound)
    return sol.y[:, -1].copy()


def flowline(f: FlowField, x, t: float, nodes: int = 200, opts: Optional[FlowOptions] = None) -> Curve:
    """Flowline from x over [0, t] sampled at equal time steps"""
    opts = opts or DEFAULT_OPTIONS
    x = np.asarray(x, dtype=float).reshape(f.dim)
    times = np.linspace(0.0, float(t), nodes)
    sol = solve_ivp(lambda _t, y: f.b(y), (0.0, float(t)), x, method=opts.method, t_eval=times,
                    rtol=opts.rtol, atol=opts.atol, events=[_escape_event(f.dim, opts.bound)])
    if sol.status != 0:
        _raise_divergence(sol, f.dim, opts.bound)
    return Curve(sol.y.T)


@dataclass(frozen=True)
class Crossing:
    """
    First crossing of one of several level sets

    Attributes:
        index: Which level function vanished
        time: Signed crossing time (negative for backward integration)
        point: Crossing point, refined so |g(point)| is tiny
        arclength: Length of the flowline piece from the start to the crossing
    """
    index: int
    time: float
    point: np.ndarray
    arclength: float

    def to_dict(self) -> dict:
        return {'index': self.index, 'time': self.time,
                'point': [float(v) for v in self.point], 'arclength': self.arclength}


def _level_event(g: LevelFn, n: int):
    def event(t, y):
        return float(g(y[:n]))
    event.terminal = True
    return event


def _stall_event(f: FlowField, tol: float):
    def stall(t, y):
        return float(np.linalg.norm(f.b(y[:f.dim]))) - tol
    stall.terminal = True
    stall.direction = -1
    return stall


def _budget_event(n: int, limit: float):
    def budget(t, y):
        return limit - abs(float(y[n]))
    budget.terminal = True
    return budget


def _polish(sol, g: LevelFn, n: int, t_hit: float, tol: float) -> float:
    """Re-solve g(psi(t)) = 0 on the dense output when the event landed loosely"""
    z = sol.sol(t_hit)[:n]
    if abs(g(z)) <= tol or len(sol.t) < 2:
        return t_hit
    t_prev = float(sol.t[-2])
    fa, fb = g(sol.sol(t_prev)[:n]), g(z)
    if np.sign(fa) == np.sign(fb):
        return t_hit
    lo, hi = min(t_prev, t_hit), max(t_prev, t_hit)
    return float(brentq(lambda s: g(sol.sol(s)[:n]), lo, hi, xtol=1e-15))


def first_crossing(f: FlowField, x, level_fns: Sequence[LevelFn], t_max: float,
                   direction: int = 1, opts: Optional[FlowOptions] = None,
                   level_tol: float = 1e-10, max_arclength: Optional[float] = None) -> Optional[Crossing]:
    """
    Integrate from x until some level function changes sign.

    Args:
        f: Drift field
        x: Start point
        level_fns: Scalar functions whose zero sets are watched
        t_max: Time budget (> 0)
        direction: +1 forward, -1 backward in time
        opts: Integrator options
        level_tol: Target for |g(point)| after refinement
        max_arclength: Stop (returning None) once the flowline is this long

    Returns:
        Crossing, or None when the time or arclength budget ran out or the
        trajectory stalled at a critical point

    Raises:
        DivergenceError: Trajectory escaped before crossing anything
    """
    opts = opts or DEFAULT_OPTIONS
    if direction not in (1, -1):
        raise ConfigError(f"direction must be +1 or -1, got {direction}")
    n = f.dim
    x = np.asarray(x, dtype=float).reshape(n)
    if not level_fns or f.speed(x) < opts.stall_tol:
        return None

    def rhs(_t, y):
        v = f.b(y[:n])
        return np.append(v, np.linalg.norm(v))

    events: List = [_escape_event(n, opts.bound), _stall_event(f, opts.stall_tol)]
    if max_arclength is not None:
        events.append(_budget_event(n, max_arclength))
    first = len(events)
    events += [_level_event(g, n) for g in level_fns]
    sol = solve_ivp(rhs, (0.0, direction * float(t_max)), np.append(x, 0.0), method=opts.method,
                    rtol=opts.rtol, atol=opts.atol, events=events, dense_output=True)
    if sol.status == -1 or len(sol.t_events[0]):
        _raise_divergence(sol, n, opts.bound)
    if sol.status == 0 or any(len(ts) for ts in sol.t_events[1:first]):
        return None
    hits = [(abs(float(ts[0])), k) for k, ts in enumerate(sol.t_events[first:]) if len(ts)]
    if not hits:
        return None
    _, k = min(hits)
    t_hit = _polish(sol, level_fns[k], n, float(sol.t_events[k + first][0]), level_tol)
    state = sol.sol(t_hit)
    return Crossing(index=k, time=t_hit, point=state[:n].copy(), arclength=abs(float(state[n])))


def advance_arclength(f: FlowField, x, length: float, direction: int = 1, t_max: float = 1e3,
                      opts: Optional[FlowOptions] = None):
    """
    Point reached after travelling `length` along the flowline through x.

    Returns:
        (point, signed time), or None when the trajectory stalls or the time
        budget runs out first

    Raises:
        DivergenceError: Trajectory escaped before covering the length
    """
    opts = opts or DEFAULT_OPTIONS
    if direction not in (1, -1):
        raise ConfigError(f"direction must be +1 or -1, got {direction}")
    if length < 0:
        raise ConfigError(f"length must be non-negative, got {length}")
    n = f.dim
    x = np.asarray(x, dtype=float).reshape(n)
    if length == 0.0:
        return x.copy(), 0.0
    if f.speed(x) < opts.stall_tol:
        return None

    def rhs(_t, y):
        v = f.b(y[:n])
        return np.append(v, np.linalg.norm(v))

    events = [_escape_event(n, opts.bound), _stall_event(f, opts.stall_tol), _budget_event(n, float(length))]
    sol = solve_ivp(rhs, (0.0, direction * float(t_max)), np.append(x, 0.0), method=opts.method,
                    rtol=opts.rtol, atol=opts.atol, events=events)
    if sol.status == -1 or len(sol.t_events[0]):
        _raise_divergence(sol, n, opts.bound)
    if not len(sol.t_events[2]):
        return None
    return sol.y_events[2][0][:n].copy(), float(sol.t_events[2][0])
