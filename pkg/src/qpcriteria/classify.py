"""
classify.py

Scenario-level classification of points and grids.

A CriteriaContext bundles what the criteria need: the action, the drift,
the manifolds that passed the admissibility check (oriented), the
equilibria and any traced limit cycles. Manifolds that fail the check are
kept with their reports, so a rejected candidate loop still shows the pair
of opposite crossings that ruled it out.

Per point the precedence is:

    prop0 -> on a limit cycle -> critical point of a driftless action
          -> prop1 (b(x) != 0) or prop2 (b(x) == 0) -> none-applicable

On a limit cycle the verdict is non-existence for actions with H(x, 0) = 0
and none-applicable otherwise.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.qpactions import LocalAction, h0_plus
from src.qpcore import Box, ConfigError, GridSpec, as_point, parallel_map
from src.qpcurves import Curve, point_to_polyline_distance
from src.qpfields import (
    Equilibrium,
    FlowField,
    LimitCycleReport,
    detect_limit_cycle,
    find_equilibria,
    make_equilibrium,
    nearest_equilibrium,
    trace_cycle,
)
from src.qpmanifolds import AdmissibilityReport, AdmissibleManifold, check_admissible, orient_manifold

from .props import (
    DEFAULT_CRITERIA,
    CriteriaOptions,
    check_local_root,
    check_prop0,
    check_prop1,
    check_prop2,
)
from .verdicts import CriteriaVerdict, Criterion, Verdict, none_applicable, summarize

logger = logging.getLogger(__name__)

ADMISSIBILITY_SAMPLES = 64
CYCLE_NODES = 400


@dataclass(frozen=True)
class CriteriaContext:
    """
    Everything the per-point criteria read; immutable and shared across workers

    Attributes:
        action: Local action
        field: Drift used for flowlines (None for driftless actions)
        manifolds: Admissible manifolds, oriented so b crosses them upwards
        rejected: Admissibility reports of manifolds that failed
        equilibria: Known equilibria of the drift
        cycles: Limit cycles as closed polylines
        cycle_reports: Detection reports matching cycles
        options: Criteria tunables
    """
    action: LocalAction
    field: Optional[FlowField] = None
    manifolds: Tuple[AdmissibleManifold, ...] = ()
    rejected: Tuple[AdmissibilityReport, ...] = ()
    equilibria: Tuple[Equilibrium, ...] = ()
    cycles: Tuple[Curve, ...] = ()
    cycle_reports: Tuple[LimitCycleReport, ...] = ()
    options: CriteriaOptions = DEFAULT_CRITERIA

    @property
    def dim(self) -> int:
        return self.action.dim

    def to_dict(self) -> Dict[str, Any]:
        return {
            'action': self.action.name,
            'field': None if self.field is None else self.field.name,
            'manifolds': [m.to_dict() for m in self.manifolds],
            'rejected': [r.to_dict() for r in self.rejected],
            'equilibria': [e.to_dict() for e in self.equilibria],
            'cycles': [r.to_dict() for r in self.cycle_reports],
            'options': self.options.to_dict(),
        }


def build_context(action: LocalAction, field: Optional[FlowField] = None,
                  manifolds: Sequence[AdmissibleManifold] = (), search_box: Optional[Box] = None,
                  cycle_seeds: Sequence[Sequence[float]] = (), options: Optional[CriteriaOptions] = None,
                  admissibility_samples: int = ADMISSIBILITY_SAMPLES) -> CriteriaContext:
    """
    Check and orient the manifolds, find equilibria and trace limit cycles.

    Args:
        action: Local action
        field: Drift (defaults to the action's own drift)
        manifolds: Candidate manifolds; failures are kept as reports only
        search_box: Region searched for equilibria (none searched when None)
        cycle_seeds: Start points of the limit-cycle search (planar fields)
        options: Criteria tunables
        admissibility_samples: Zero-set samples per manifold check

    Raises:
        ConfigError: Manifolds given without any drift
    """
    options = options or DEFAULT_CRITERIA
    field = field if field is not None else action.drift
    if manifolds and field is None:
        raise ConfigError("Manifolds need a drift field to be checked")
    accepted: List[AdmissibleManifold] = []
    rejected: List[AdmissibilityReport] = []
    for m in manifolds:
        report = check_admissible(m, field, samples=admissibility_samples, seed=options.seed)
        if report.passed:
            accepted.append(orient_manifold(m, report))
        else:
            logger.warning("Manifold '%s' is not admissible (worst margin %.3g, flip pair %s)",
                           m.id, report.worst_margin, report.flip_pair)
            rejected.append(report)
    equilibria: Tuple[Equilibrium, ...] = ()
    if field is not None and search_box is not None:
        equilibria = tuple(find_equilibria(field, search_box))
    cycles, reports = [], []
    for seed in cycle_seeds:
        report = detect_limit_cycle(field, seed, opts=options.flow)
        if report.found:
            cycles.append(trace_cycle(field, report, nodes=CYCLE_NODES, opts=options.flow))
            reports.append(report)
    logger.info("Criteria context: %d admissible, %d rejected manifolds, %d equilibria, %d cycles",
                len(accepted), len(rejected), len(equilibria), len(cycles))
    return CriteriaContext(action, field, tuple(accepted), tuple(rejected), equilibria,
                           tuple(cycles), tuple(reports), options)


def _cycle_hit(ctx: CriteriaContext, x: np.ndarray) -> Optional[Tuple[int, float]]:
    for k, cycle in enumerate(ctx.cycles):
        d = float(point_to_polyline_distance(x[None, :], cycle)[0])
        if d <= ctx.options.cycle_band:
            return k, d
    return None


def _equilibrium_at(ctx: CriteriaContext, x: np.ndarray) -> Equilibrium:
    eq = nearest_equilibrium(ctx.equilibria, x)
    if eq is not None and float(np.linalg.norm(eq.point - x)) <= ctx.options.eq_tol:
        return eq
    return make_equilibrium(ctx.field, x)


def classify_point(ctx: CriteriaContext, x) -> CriteriaVerdict:
    """Verdict at one point; never raises for a point without a verdict"""
    o = ctx.options
    x = as_point(x, ctx.dim)
    verdict = check_prop0(ctx.action, x, o.directions, o.tol_pos, o.seed)
    if verdict is not None:
        return verdict
    hit = _cycle_hit(ctx, x)
    if hit is not None:
        k, d = hit
        if h0_plus(ctx.action):
            return CriteriaVerdict(tuple(x.tolist()), Verdict.NON_EXISTENCE, Criterion.LIMIT_CYCLE_NEGATIVE,
                                   {'cycle': k, 'distance': d}, margin=d)
        return none_applicable(x, reason='on a limit cycle', cycle=k, distance=d)
    if not h0_plus(ctx.action):
        verdict = check_local_root(ctx.action, x, o)
        if verdict is not None:
            return verdict
    if ctx.field is None:
        return none_applicable(x, reason='no drift')
    if ctx.field.speed(x) >= o.flow.stall_tol:
        verdict = check_prop1(ctx.field, ctx.manifolds, x, o.t_max, o.flow)
        if verdict is not None:
            return verdict
        return none_applicable(x, reason='no manifold crossing', t_max=o.t_max)
    eq = _equilibrium_at(ctx, x)
    verdict = check_prop2(ctx.field, ctx.action, eq, ctx.manifolds, o)
    if verdict is not None:
        return verdict
    return none_applicable(x, reason=f'{eq.kind.value} equilibrium without a verdict', equilibrium=eq.to_dict())


def classify_points(ctx: CriteriaContext, points, threads: Optional[int] = None) -> List[CriteriaVerdict]:
    """Verdicts in input order; the result does not depend on the worker count"""
    points = np.asarray(points, dtype=float).reshape(-1, ctx.dim)
    verdicts = parallel_map(lambda x: classify_point(ctx, x), list(points), threads)
    summary = summarize(verdicts)
    logger.info("Classified %d points: %s (coverage %.1f%%)", summary.total, summary.by_verdict,
                100.0 * summary.coverage)
    return verdicts


def classify_grid(ctx: CriteriaContext, grid: GridSpec, threads: Optional[int] = None) -> List[CriteriaVerdict]:
    """Verdicts for every grid point in C order"""
    if grid.box.dim != ctx.dim:
        raise ConfigError(f"Grid has dimension {grid.box.dim}, scenario {ctx.dim}")
    return classify_points(ctx, grid.points(), threads)
