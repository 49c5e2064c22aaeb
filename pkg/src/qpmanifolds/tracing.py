"""
tracing.py

Flowline tracing functions and the key length-versus-action estimate.

A tracing function f satisfies <grad f, b> = +|b| (or uniformly -|b|) on
E = f^{-1}((q1, q2)): it measures arclength along flowlines. Given the
sampled constants H >= sup_E |grad f| and G <= inf_E |b|, every curve obeys

    length(c restricted to E) <= 2 H^2 / (A G) S(c) + 2 |h(f(start)) - h(f(end))|

where h clamps to [q1, q2] and A is the drift lower-bound constant of the
action.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, NamedTuple, Optional

import numpy as np

from src.qpactions import LocalAction
from src.qpcore import (
    Box,
    ConfigError,
    NotInBasinError,
    PreconditionError,
    ShrinkEpsError,
    numerical_gradient,
    parallel_map,
)
from src.qpcurves import Curve, as_curve, restricted_length
from src.qpfields import (
    DEFAULT_OPTIONS,
    Equilibrium,
    EquilibriumKind,
    FlowField,
    FlowOptions,
    equilibrium_distance,
    flow,
)
from src.qpfunctional import geometric_action

from .admissible import zero_set_points
from .coordinates import T_MAX, locate
from .manifold import AdmissibleManifold

logger = logging.getLogger(__name__)

TRACING_SAMPLES = 1024
TRACING_STEP = 1e-5
TRACING_TOL = 1e-6
CHECK_DT = 1e-2
# five-point stencil for d/dt f(psi(x, t)) at t = 0
STENCIL = ((-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0))
ORIENTATION_RAYS = 16


def clamp(q1: float, q2: float, a: float) -> float:
    """
    min(max(a, q1), q2).

    Raises:
        ConfigError: q1 >= q2
    """
    if q1 >= q2:
        raise ConfigError(f"Clamp needs q1 < q2, got ({q1}, {q2})")
    return float(min(max(a, q1), q2))


@dataclass(frozen=True)
class TracingFunction:
    """
    Function tracing the flowlines of b between two values

    Attributes:
        f: Point-wise function
        q1: Lower end of the traced range
        q2: Upper end (q2 > q1)
        grad_bound: H, sampled sup of |grad f| over E
        min_drift: G, sampled inf of |b| over the closure of E
        dim: Ambient dimension
        branch: +1 when <grad f, b> = |b|, -1 when it is -|b|, 0 if unknown
        region_box: Box containing E (used for sampling)
        name: Construction used
        params: Construction parameters (for reports)
    """
    f: Callable[[np.ndarray], float]
    q1: float
    q2: float
    grad_bound: float
    min_drift: float
    dim: int
    branch: int = 0
    region_box: Optional[Box] = None
    name: str = 'custom'
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.q1 >= self.q2:
            raise ConfigError(f"Tracing range needs q1 < q2, got ({self.q1}, {self.q2})")
        if not (self.grad_bound > 0.0 and np.isfinite(self.grad_bound)):
            raise ConfigError(f"Gradient bound must be positive and finite, got {self.grad_bound}")
        if not self.min_drift > 0.0:
            raise ConfigError(f"Minimum drift must be positive, got {self.min_drift}")

    def __call__(self, x) -> float:
        return float(self.f(np.asarray(x, dtype=float).reshape(self.dim)))

    def clamped(self, x) -> float:
        return clamp(self.q1, self.q2, self(x))

    def in_region(self, x) -> bool:
        return self.q1 < self(x) < self.q2

    def gradient(self, x, h: float = TRACING_STEP) -> np.ndarray:
        return numerical_gradient(self, np.asarray(x, dtype=float).reshape(self.dim), h)

    def to_dict(self) -> dict:
        return {'name': self.name, 'q1': self.q1, 'q2': self.q2, 'grad_bound': self.grad_bound,
                'min_drift': self.min_drift, 'branch': self.branch, 'params': dict(self.params),
                'region_box': None if self.region_box is None else self.region_box.to_dict()}


def _sample_region(fn: Callable[[np.ndarray], float], box: Box, q1: float, q2: float,
                   samples: int, seed: int):
    X = box.sobol(samples, seed)
    values = np.array(parallel_map(fn, list(X)))
    inside = (values > q1) & (values < q2)
    return X, values, inside


def _constants(fn: Callable[[np.ndarray], float], f: FlowField, X: np.ndarray, h: float):
    if len(X) == 0:
        raise ConfigError("No sample landed in the traced region; increase samples")
    grads = parallel_map(lambda x: float(np.linalg.norm(numerical_gradient(fn, x, h))), list(X))
    speeds = np.linalg.norm(f.b_batch(X), axis=1)
    return float(max(grads)), float(np.min(speeds))


def _downstream_orientation(m: AdmissibleManifold, f: FlowField, seed: int) -> AdmissibleManifold:
    Z = zero_set_points(m, ORIENTATION_RAYS, seed)
    flux = sum(float(np.dot(m.gradient(z), f.b(z))) for z in Z)
    return m if flux >= 0.0 else m.oriented(-1)


def tracing_from_manifold(m: AdmissibleManifold, f: FlowField, eps: float, samples: int = TRACING_SAMPLES,
                          seed: int = 0, t_max: float = T_MAX,
                          opts: Optional[FlowOptions] = None) -> TracingFunction:
    """
    Signed flowline arclength from M, clamped to [-2 eps, 2 eps].

    f(x) = +length of the flowline from z(x) to x when x lies downstream
    of M and -length upstream. Points farther than 2 eps along their
    flowline, or not on any flowline through M, get 2 eps sign(f_M(x)).

    Args:
        m: Admissible manifold (its orientation is normalised here)
        f: Drift field
        eps: Traced range is (-eps, eps)
        samples: Sobol points in the box around M used for H and G
        seed: Sampling seed
        t_max: Time budget for the reachability fallback
        opts: Integrator options

    Raises:
        ConfigError: eps <= 0 or no sample in E
        ShrinkEpsError: A sample close to M is not reachable from M
    """
    if eps <= 0.0:
        raise ConfigError(f"eps must be positive, got {eps}")
    opts = opts or DEFAULT_OPTIONS
    m = _downstream_orientation(m, f, seed)
    cap = 2.0 * eps

    def fn(x: np.ndarray) -> float:
        found = locate(m, f, x, t_max, opts, max_arclength=cap)
        if found is None:
            return float(np.copysign(cap, m.value(x)))
        return float(np.copysign(found.arclength, found.t))

    box = Box.from_bounds(m.bounding_box.lo - eps, m.bounding_box.hi + eps)
    X, values, inside = _sample_region(fn, box, -eps, eps, samples, seed)
    for x, v in zip(X, values):
        if abs(v) < cap:
            continue
        g = float(np.linalg.norm(m.gradient(x)))
        if g > 0.0 and abs(m.value(x)) / g < 0.5 * eps and locate(m, f, x, t_max, opts) is None:
            raise ShrinkEpsError(f"Sample {x.tolist()} near manifold '{m.id}' is not on a flowline through it",
                                 eps=eps)
    grad_bound, min_drift = _constants(fn, f, X[inside], TRACING_STEP)
    logger.debug("tracing_from_manifold: '%s' eps=%g H=%.6g G=%.6g (%d of %d samples in E)",
                 m.id, eps, grad_bound, min_drift, int(inside.sum()), samples)
    return TracingFunction(fn, -eps, eps, grad_bound, min_drift, m.dim, branch=1, region_box=box,
                           name='manifold', params={'manifold': m.id, 'eps': eps, 'samples': samples})


def tracing_from_equilibrium(f: FlowField, eq: Equilibrium, eps: float, samples: int = 256,
                             seed: int = 0, **distance_kwargs) -> TracingFunction:
    """
    f_1(w) = min(f_s(w), eps) around an attractor, min(f_u(w), eps) around a repellor.

    Points outside the basin evaluate to eps. Since f_s(w) >= |w - eq|,
    points at distance eps or more skip the flow integration.

    Raises:
        PreconditionError: eq is a saddle or degenerate
        ConfigError: eps <= 0
    """
    if eq.kind not in (EquilibriumKind.ATTRACTOR, EquilibriumKind.REPELLOR):
        raise PreconditionError(f"tracing_from_equilibrium needs an attractor or repellor, got {eq.kind.value}")
    if eps <= 0.0:
        raise ConfigError(f"eps must be positive, got {eps}")
    center = eq.point
    distance_kwargs.setdefault('scale', eps)

    def fn(w: np.ndarray) -> float:
        if float(np.linalg.norm(w - center)) >= eps:
            return float(eps)
        try:
            return min(equilibrium_distance(f, eq, w, **distance_kwargs), float(eps))
        except NotInBasinError:
            return float(eps)

    box = Box.around(center, eps)
    X, _, inside = _sample_region(fn, box, 0.0, eps, samples, seed)
    grad_bound, min_drift = _constants(fn, f, X[inside], TRACING_STEP * eps)
    branch = -1 if eq.kind == EquilibriumKind.ATTRACTOR else 1
    return TracingFunction(fn, 0.0, float(eps), grad_bound, min_drift, f.dim, branch=branch,
                           region_box=box, name='equilibrium',
                           params={'equilibrium': eq.to_dict(), 'eps': eps, 'samples': samples})


class KeyEstimate(NamedTuple):
    """Both sides of the key estimate for one curve"""
    lhs: float
    rhs: float


def key_estimate_bound(t: TracingFunction, a: LocalAction, A_const: float, c: Curve) -> KeyEstimate:
    """
    Length of c inside E against 2 H^2 / (A G) S(c) + 2 |h(f(start)) - h(f(end))|.

    Membership in E is decided at chord midpoints, so lhs <= rhs holds up
    to a slack of the order of the node spacing.

    Raises:
        ConfigError: A_const <= 0
    """
    if A_const <= 0.0:
        raise ConfigError(f"Drift constant must be positive, got {A_const}")
    c = as_curve(c)
    lhs = restricted_length(c, t.in_region)
    factor = 2.0 * t.grad_bound ** 2 / (A_const * t.min_drift)
    delta = abs(t.clamped(c.nodes[0]) - t.clamped(c.nodes[-1]))
    return KeyEstimate(lhs, factor * geometric_action(a, c) + 2.0 * delta)


@dataclass
class TracingCheck:
    """
    Sampled tracing property ||<grad f, b>| - |b|| <= tol on E

    Attributes:
        checked: Samples of E used
        worst_error: Largest deviation
        branch: Sign of <grad f, b> when uniform, else 0
        uniform: All samples agreed on the sign
        tol: Allowed deviation
        worst_point: Sample of the largest deviation
    """
    checked: int
    worst_error: float
    branch: int
    uniform: bool
    tol: float = TRACING_TOL
    worst_point: Optional[List[float]] = None

    @property
    def passed(self) -> bool:
        return self.checked > 0 and self.uniform and self.worst_error <= self.tol

    def to_dict(self) -> dict:
        return {'checked': self.checked, 'worst_error': self.worst_error, 'branch': self.branch,
                'uniform': self.uniform, 'tol': self.tol, 'worst_point': self.worst_point,
                'passed': self.passed}


def check_tracing(t: TracingFunction, f: FlowField, samples: int = 256, seed: int = 0,
                  box: Optional[Box] = None, tol: float = TRACING_TOL, dt: float = CHECK_DT,
                  opts: Optional[FlowOptions] = None) -> TracingCheck:
    """
    Fourth-order difference of f along the flow at sampled points of E.

    d/dt f(psi(x, t)) at t = 0 equals <grad f(x), b(x)>; points whose
    stencil points psi(x, k dt), |k| <= 2, leave E are skipped.

    Raises:
        ConfigError: Neither box nor t.region_box is available
    """
    box = box or t.region_box
    if box is None:
        raise ConfigError("check_tracing needs a sampling box")
    opts = opts or DEFAULT_OPTIONS
    X = box.sobol(samples, seed)

    def trace_one(x: np.ndarray):
        if not t.in_region(x) or f.speed(x) < opts.stall_tol:
            return None
        total = 0.0
        for k, weight in STENCIL:
            y = flow(f, x, k * dt, opts)
            value = t(y)
            if not t.q1 < value < t.q2:
                return None
            total += weight * value
        return total / (12.0 * dt), f.speed(x)

    results = [(x, r) for x, r in zip(X, parallel_map(trace_one, list(X))) if r is not None]
    if not results:
        logger.info("check_tracing: no usable sample in E")
        return TracingCheck(0, float('inf'), 0, False, tol)
    derivs = np.array([r[0] for _, r in results])
    errors = np.abs(np.abs(derivs) - np.array([r[1] for _, r in results]))
    signs = np.sign(derivs)
    uniform = bool(np.all(signs == signs[0]) and signs[0] != 0)
    k = int(np.argmax(errors))
    return TracingCheck(len(results), float(errors[k]), int(signs[0]) if uniform else 0, uniform, tol,
                        results[k][0].tolist())
