"""
suites.py

Property suites run by `quasipath verify`.

Each suite checks one property of a scenario on sampled inputs and
returns Events: INFO when the property held, WARNING for soft findings,
ERROR for a violation. Every event carries the tolerances and the seed
it used.
"""

import logging
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional, Sequence, Type

import numpy as np

from src.qpactions import drift_constant, from_hamiltonian, legendre_lagrangian_batch, sde_hamiltonian, sde_randers_action
from src.qpcore import Box, ConfigError, PreconditionError, make_rng
from src.qpcurves import Curve, curve_length, point_to_polyline_distance, reparameterize_arclength
from src.qpfields import EquilibriumKind, flowline, separatrix_from_saddle, trace_invariant_manifolds_2d
from src.qpfunctional import DOUBLE_INF_TOL, compare_double_inf, drift_lower_bound_check, geometric_action
from src.qpmanifolds import check_admissible, key_estimate_bound, sphere, tracing_from_manifold
from src.qpminimize import PASS_TOL, density_spikes, descent_derivative, hitting_report, off_flow_segments

from .context import VerifyContext
from .events import Event, error, info, warning

logger = logging.getLogger(__name__)


class Suite(ABC):
    """
    Base class for property suites

    Subclasses set `name`, take their tunables as keyword arguments and
    implement run().
    """
    name: str = 'suite'

    @abstractmethod
    def run(self, ctx: VerifyContext) -> List[Event]:
        """Check the property on ctx; never raises for a violated property"""

    def params(self) -> Dict[str, Any]:
        return {k: v for k, v in vars(self).items() if not k.startswith('_')}

    def _seed(self, ctx: VerifyContext) -> int:
        return ctx.seed if getattr(self, 'seed', None) is None else self.seed

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.params()})"


def _drift_constant(ctx: VerifyContext, K: Box, A_const: Optional[float], seed: int) -> float:
    if A_const is not None:
        return float(A_const)
    h = ctx.action.hamiltonian
    if h is None:
        raise ConfigError(f"Action '{ctx.action.name}' has no Hamiltonian; give A_const")
    return drift_constant(h, K, seed=seed)


class FlowlineZeroCost(Suite):
    """A numerically integrated flowline costs (almost) nothing"""
    name = 'flowline_zero_cost'

    def __init__(self, start: Sequence[float], t: float = 5.0, nodes: int = 400, tol: float = 1e-6,
                 min_length: float = 1.0):
        self.start = [float(v) for v in start]
        self.t = float(t)
        self.nodes = int(nodes)
        self.tol = float(tol)
        self.min_length = float(min_length)

    def run(self, ctx: VerifyContext) -> List[Event]:
        f = ctx.require_field()
        c = flowline(f, self.start, self.t, self.nodes)
        length = curve_length(c)
        value = geometric_action(ctx.action, c)
        data = dict(self.params(), length=length, action=value)
        events = []
        if length < self.min_length:
            events.append(warning(self.name, f"flowline length {length:.4g} below {self.min_length:g}", **data))
        if value < self.tol:
            events.append(info(self.name, f"S(flowline) = {value:.3e} < {self.tol:g}", **data))
        else:
            events.append(error(self.name, f"S(flowline) = {value:.3e} >= {self.tol:g}", **data))
        return events


class DriftLowerBound(Suite):
    """l(x, y) >= A (|b||y| - <b, y>) on random samples"""
    name = 'drift_lower_bound'

    def __init__(self, samples: int = 10000, box: Optional[Sequence] = None, A_const: Optional[float] = None,
                 tol: float = 1e-9, seed: Optional[int] = None):
        self.samples = int(samples)
        self.box = box
        self.A_const = A_const
        self.tol = float(tol)
        self.seed = seed

    def run(self, ctx: VerifyContext) -> List[Event]:
        K = ctx.require_box(self.box)
        seed = self._seed(ctx)
        A = _drift_constant(ctx, K, self.A_const, seed)
        report = drift_lower_bound_check(ctx.action, ctx.require_field(), A, K, self.samples, seed, self.tol)
        data = dict(report.to_dict(), box=K.to_dict(), seed=seed)
        if report.passed:
            return [info(self.name, f"no violation in {self.samples} samples (A = {A:.6g})", **data)]
        return [error(self.name, f"{report.violation_count} of {self.samples} samples violate A = {A:.6g}",
                      **data)]


class KeyEstimate(Suite):
    """length(c restricted to E) <= 2 H^2 / (A G) S(c) + 2 |delta h| on random polylines"""
    name = 'key_estimate'

    def __init__(self, manifold: str, eps: float, curves: int = 100, nodes: int = 101, vertices: int = 4,
                 samples: int = 128, A_const: Optional[float] = None, slack: float = 1e-6,
                 box: Optional[Sequence] = None, seed: Optional[int] = None):
        if curves < 1 or nodes < 2 or vertices < 2:
            raise ConfigError(f"curves, nodes and vertices too small: {curves}, {nodes}, {vertices}")
        self.manifold = str(manifold)
        self.eps = float(eps)
        self.curves = int(curves)
        self.nodes = int(nodes)
        self.vertices = int(vertices)
        self.samples = int(samples)
        self.A_const = A_const
        self.slack = float(slack)
        self.box = box
        self.seed = seed

    def run(self, ctx: VerifyContext) -> List[Event]:
        f = ctx.require_field()
        seed = self._seed(ctx)
        t = tracing_from_manifold(ctx.manifold(self.manifold), f, self.eps, samples=self.samples, seed=seed)
        box = t.region_box if self.box is None and t.region_box is not None else ctx.require_box(self.box)
        A = _drift_constant(ctx, box, self.A_const, seed)
        rng = make_rng(seed)
        worst, violations = float('inf'), []
        for k in range(self.curves):
            raw = Curve(rng.uniform(box.lo, box.hi, (self.vertices, box.dim)))
            spacing = curve_length(raw) / (self.nodes - 1)
            lhs, rhs = key_estimate_bound(t, ctx.action, A, reparameterize_arclength(raw, self.nodes))
            margin = rhs + self.slack + 2.0 * spacing - lhs
            worst = min(worst, margin)
            if margin < 0.0:
                violations.append({'curve': k, 'lhs': lhs, 'rhs': rhs, 'spacing': spacing})
        data = dict(self.params(), seed=seed, A_const=A, tracing=t.to_dict(), worst_margin=worst,
                    violations=violations)
        if violations:
            return [error(self.name, f"{len(violations)} of {self.curves} polylines break the estimate", **data)]
        return [info(self.name, f"{self.curves} polylines satisfy the estimate (worst margin {worst:.4g})",
                     **data)]


class DescentDirection(Suite):
    """Bending an off-flow end segment into the flow lowers the action"""
    name = 'descent_direction'

    def __init__(self, curves: int = 20, alpha0: float = 0.99, box: Optional[Sequence] = None,
                 length: float = 0.3, min_speed: float = 0.3, max_cos: float = 0.7, seed: Optional[int] = None):
        self.curves = int(curves)
        self.alpha0 = float(alpha0)
        self.box = box
        self.length = float(length)
        self.min_speed = float(min_speed)
        self.max_cos = float(max_cos)
        self.seed = seed

    def run(self, ctx: VerifyContext) -> List[Event]:
        f = ctx.require_field()
        seed = self._seed(ctx)
        K = ctx.require_box(self.box)
        segments = off_flow_segments(f, K, self.curves, seed, self.length, self.min_speed, self.max_cos)
        values = [descent_derivative(c, ctx.action, f, self.alpha0) for c in segments]
        bad = [k for k, v in enumerate(values) if not v < 0.0]
        data = dict(self.params(), seed=seed, derivatives=values, largest=max(values), non_negative=bad)
        if bad:
            return [error(self.name, f"{len(bad)} of {self.curves} bends do not descend", **data)]
        return [info(self.name, f"all {self.curves} bends descend (largest derivative {max(values):.4g})",
                     **data)]


class HittingReportSuite(Suite):
    """The minimizer crosses the separatrix at a critical point and descends for free"""
    name = 'hitting_report'

    def __init__(self, pass_tol: float = PASS_TOL, arc_budget: float = 2.0,
                 action_range: Optional[Sequence[float]] = None, downhill_max: Optional[float] = None,
                 spikes: bool = True):
        self.pass_tol = float(pass_tol)
        self.arc_budget = float(arc_budget)
        self.action_range = None if action_range is None else [float(v) for v in action_range]
        self.downhill_max = None if downhill_max is None else float(downhill_max)
        self.spikes = bool(spikes)

    def _minimizer_events(self, r) -> List[Event]:
        summary = {k: v for k, v in r.to_dict().items() if k not in ('action_history', 'winding_history')}
        events = []
        if not r.monotone:
            events.append(error(self.name, "action history increased", **summary))
        elif r.converged:
            events.append(info(self.name, f"minimizer S = {r.action_value:.8g} ({r.stop_reason})", **summary))
        else:
            events.append(warning(self.name, f"minimizer did not converge (S = {r.action_value:.8g})", **summary))
        if self.action_range is not None:
            lo, hi = self.action_range
            data = {'action': r.action_value, 'action_range': self.action_range}
            if lo <= r.action_value <= hi:
                events.append(info(self.name, f"S in [{lo:g}, {hi:g}]", **data))
            else:
                events.append(error(self.name, f"S = {r.action_value:.8g} outside [{lo:g}, {hi:g}]", **data))
        return events

    def run(self, ctx: VerifyContext) -> List[Event]:
        f = ctx.require_field()
        if ctx.dim != 2:
            raise PreconditionError(f"hitting_report needs a planar scenario, got dim={ctx.dim}")
        r = ctx.minimized()
        events = self._minimizer_events(r)
        eqs = ctx.equilibria(ctx.problem.box)
        saddles = [e for e in eqs if e.kind == EquilibriumKind.SADDLE]
        if not saddles:
            events.append(warning(self.name, "no saddle, no separatrix to cross"))
            return events
        nearest = min(saddles, key=lambda e: float(point_to_polyline_distance(e.point[None, :], r.curve)[0]))
        sep = separatrix_from_saddle(trace_invariant_manifolds_2d(f, nearest, self.arc_budget))
        report = hitting_report(r, f, sep, [e.point for e in eqs], pass_tol=self.pass_tol, action=ctx.action)
        data = dict(report.to_dict(), saddle=nearest.point.tolist(), arc_budget=self.arc_budget)
        if not report.crossed:
            events.append(warning(self.name, "minimizer never meets the separatrix", **data))
        elif report.passed:
            events.append(info(self.name, f"hits at {report.first_distance:.3g} and {report.last_distance:.3g} "
                                          f"from a critical point", **data))
        else:
            events.append(error(self.name, f"hits at {report.first_distance:.3g} and {report.last_distance:.3g}, "
                                           f"not within {self.pass_tol:g} of a critical point", **data))
        fraction = report.downhill_fraction
        if self.downhill_max is not None and fraction is not None:
            msg = f"downhill fraction {fraction:.3e}"
            if fraction <= self.downhill_max:
                events.append(info(self.name, msg, downhill_fraction=fraction, downhill_max=self.downhill_max))
            else:
                events.append(error(self.name, f"{msg} above {self.downhill_max:g}",
                                    downhill_fraction=fraction, downhill_max=self.downhill_max))
        if self.spikes:
            spikes = density_spikes(r, f, eqs)
            if spikes.consistent:
                events.append(info(self.name, f"{len(spikes.spikes)} density spikes, all near critical points",
                                   **spikes.to_dict()))
            else:
                events.append(warning(self.name, "density spikes away from critical points", **spikes.to_dict()))
        return events


class Admissibility(Suite):
    """
    Admissibility of the scenario manifolds against expectations, plus
    random loops crossing a limit cycle, all of which must be rejected
    with an exhibited pair of opposite crossings.
    """
    name = 'admissibility'

    def __init__(self, expect_pass: Sequence[str] = (), expect_fail: Sequence[str] = (),
                 random_loops: Optional[Dict[str, Any]] = None, samples: int = 64, seed: Optional[int] = None):
        overlap = set(expect_pass) & set(expect_fail)
        if overlap:
            raise ConfigError(f"Manifolds expected both to pass and to fail: {sorted(overlap)}")
        self.expect_pass = list(expect_pass)
        self.expect_fail = list(expect_fail)
        self.random_loops = dict(random_loops) if random_loops else None
        self.samples = int(samples)
        self.seed = seed

    def _loops(self, seed: int):
        cfg = self.random_loops
        count = int(cfg.get('count', 10))
        center = np.asarray(cfg.get('center', [0.0, 0.0]), dtype=float)
        R = float(cfg.get('radius', 1.0))
        rng = make_rng(seed)
        for k in range(count):
            d = rng.uniform(0.2 * R, 0.8 * R)
            phi = rng.uniform(0.0, 2.0 * np.pi)
            c = center + d * np.array([np.cos(phi), np.sin(phi)])
            r = rng.uniform(R - 0.9 * d, R + 0.9 * d)
            yield sphere(c, r, f"loop-{k}")

    def run(self, ctx: VerifyContext) -> List[Event]:
        f = ctx.require_field()
        seed = self._seed(ctx)
        known = {m.id for m in ctx.manifolds}
        missing = sorted((set(self.expect_pass) | set(self.expect_fail)) - known)
        if missing:
            raise ConfigError(f"Expectations name unknown manifolds: {missing}")
        events = []
        for m in ctx.manifolds:
            report = check_admissible(m, f, samples=self.samples, seed=seed)
            data = report.to_dict()
            if m.id in self.expect_fail:
                if report.passed:
                    events.append(error(self.name, f"'{m.id}' passed but was expected to fail", **data))
                else:
                    events.append(info(self.name, f"'{m.id}' rejected as expected", **data))
            elif report.passed:
                events.append(info(self.name, f"'{m.id}' admissible", **data))
            elif m.id in self.expect_pass:
                events.append(error(self.name, f"'{m.id}' rejected but was expected to pass", **data))
            else:
                events.append(warning(self.name, f"'{m.id}' rejected", **data))
        if self.random_loops is not None:
            for loop in self._loops(seed):
                report = check_admissible(loop, f, samples=self.samples, seed=seed)
                data = dict(report.to_dict(), loop=loop.to_dict())
                if report.passed:
                    events.append(error(self.name, f"{loop.id} crosses the cycle yet passed", **data))
                elif report.flip_pair is None:
                    events.append(error(self.name, f"{loop.id} rejected without a sign-flip pair", **data))
                else:
                    events.append(info(self.name, f"{loop.id} rejected with a sign-flip pair", **data))
        return events


class LegendrePointwise(Suite):
    """
    The Legendre transform of the SDE Hamiltonian is |y - b|^2 / 2, and the
    geometric action never exceeds constant-speed time actions.
    """
    name = 'legendre_pointwise'

    def __init__(self, samples: int = 1000, box: Optional[Sequence] = None, tol: float = 1e-10,
                 curves: int = 10, span: float = 0.3, T_grid: Optional[Sequence[float]] = None,
                 double_inf_tol: float = DOUBLE_INF_TOL, seed: Optional[int] = None):
        self.samples = int(samples)
        self.box = box
        self.tol = float(tol)
        self.curves = int(curves)
        self.span = float(span)
        self.T_grid = list(np.logspace(-2, 1, 31)) if T_grid is None else [float(T) for T in T_grid]
        self.double_inf_tol = float(double_inf_tol)
        self.seed = seed

    def run(self, ctx: VerifyContext) -> List[Event]:
        f = ctx.require_field()
        K = ctx.require_box(self.box)
        seed = self._seed(ctx)
        h = sde_hamiltonian(f)
        rng = make_rng(seed)
        X = K.sample(rng, self.samples)
        Y = rng.standard_normal((self.samples, K.dim))
        L = legendre_lagrangian_batch(h, X, Y)
        deviation = float(np.max(np.abs(L - 0.5 * np.sum((Y - f.b_batch(X)) ** 2, axis=1))))
        data = {'samples': self.samples, 'tol': self.tol, 'max_deviation': deviation, 'seed': seed}
        events = []
        if deviation < self.tol:
            events.append(info(self.name, f"max |L - |y - b|^2/2| = {deviation:.3e}", **data))
        else:
            events.append(error(self.name, f"max |L - |y - b|^2/2| = {deviation:.3e} >= {self.tol:g}", **data))
        excess = []
        for _ in range(self.curves):
            start = K.sample(rng, 1)[0]
            steps = rng.standard_normal((2, K.dim))
            steps *= 0.5 * self.span / np.linalg.norm(steps, axis=1, keepdims=True)
            c = reparameterize_arclength(Curve(np.vstack([start, start + np.cumsum(steps, axis=0)])), 21)
            report = compare_double_inf(h, c, self.T_grid, tol=self.double_inf_tol, seed=seed)
            excess.append(report.geometric - report.minimum)
        data = {'curves': self.curves, 'tol': self.double_inf_tol, 'excess': excess, 'seed': seed,
                'T_grid': [float(T) for T in self.T_grid]}
        if max(excess) <= self.double_inf_tol:
            events.append(info(self.name, f"S <= min_T S_T on {self.curves} curves", **data))
        else:
            events.append(error(self.name, f"S exceeds min_T S_T by {max(excess):.3e}", **data))
        return events


class RandersAgreement(Suite):
    """The Randers closed form equals the SDE Hamiltonian action"""
    name = 'randers_agreement'

    def __init__(self, samples: int = 1000, box: Optional[Sequence] = None, tol: float = 1e-8,
                 seed: Optional[int] = None):
        self.samples = int(samples)
        self.box = box
        self.tol = float(tol)
        self.seed = seed

    def run(self, ctx: VerifyContext) -> List[Event]:
        f = ctx.require_field()
        K = ctx.require_box(self.box)
        seed = self._seed(ctx)
        rng = make_rng(seed)
        X = K.sample(rng, self.samples)
        Y = rng.standard_normal((self.samples, K.dim))
        closed = sde_randers_action(f).evaluate_batch(X, Y)
        induced = from_hamiltonian(sde_hamiltonian(f), seed=seed).evaluate_batch(X, Y)
        deviation = float(np.max(np.abs(closed - induced)))
        data = {'samples': self.samples, 'tol': self.tol, 'max_deviation': deviation, 'seed': seed}
        if deviation < self.tol:
            return [info(self.name, f"max deviation {deviation:.3e}", **data)]
        return [error(self.name, f"max deviation {deviation:.3e} >= {self.tol:g}", **data)]


SUITES: Dict[str, Type[Suite]] = {
    cls.name: cls for cls in (FlowlineZeroCost, DriftLowerBound, KeyEstimate, DescentDirection,
                              HittingReportSuite, Admissibility, LegendrePointwise, RandersAgreement)
}


def available_suites() -> List[str]:
    return sorted(SUITES)


def build_suite(name: str, params: Optional[Dict[str, Any]] = None) -> Suite:
    """
    Raises:
        ConfigError: Unknown suite or bad parameters
    """
    if name not in SUITES:
        raise ConfigError(f"Unknown suite '{name}'; available: {', '.join(available_suites())}")
    try:
        return SUITES[name](**dict(params or {}))
    except TypeError as exc:
        raise ConfigError(f"Bad parameters for suite '{name}': {exc}") from exc
