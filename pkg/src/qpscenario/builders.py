"""
builders.py

Runtime objects from a validated scenario.

build_runtime makes the field, action and manifolds once; the other
builders derive the minimization problem, the criteria context, the
classification points and the verification context from it.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from src.qpactions import LocalAction, build_action
from src.qpcore import Box, ConfigError, GridSpec, thread_count
from src.qpcriteria import CriteriaContext, CriteriaOptions, build_context
from src.qpcurves import Curve, read_curve_csv
from src.qpfields import FlowField, build_field
from src.qpmanifolds import AdmissibleManifold, build_manifolds
from src.qpminimize import EndpointSet, MinimizeProblem
from src.qpverify import RunnerConfig, VerifyContext, build_suite

from .models import EndpointKind, EndpointSection, Scenario

logger = logging.getLogger(__name__)


@dataclass
class ScenarioRuntime:
    """
    Runtime objects of a scenario

    Attributes:
        scenario: Parsed scenario
        field: Drift (the configured field, else the action's natural drift)
        action: Local action
        manifolds: Candidate manifolds in scenario order
        box: Scenario box (run.box, else the problem box, else the grid box)
        seed: Effective seed
        threads: Effective worker count
    """
    scenario: Scenario
    field: Optional[FlowField]
    action: LocalAction
    manifolds: List[AdmissibleManifold]
    box: Optional[Box]
    seed: int
    threads: int

    @property
    def dim(self) -> int:
        return self.action.dim

    def manifold(self, manifold_id: str) -> AdmissibleManifold:
        for m in self.manifolds:
            if m.id == manifold_id:
                return m
        raise ConfigError(f"Unknown manifold '{manifold_id}'")


def _scenario_box(s: Scenario) -> Optional[Box]:
    for section in (s.run.box, s.problem and s.problem.box, s.criteria and s.criteria.grid and s.criteria.grid.box):
        if section:
            return section.to_box()
    return None


def build_runtime(s: Scenario, seed: Optional[int] = None, threads: Optional[int] = None) -> ScenarioRuntime:
    """
    Field, action and manifolds of a scenario

    Args:
        s: Validated scenario
        seed: Overrides run.seed
        threads: Overrides run.threads and QUASIPATH_THREADS

    Raises:
        ConfigError: Bad registry parameters, a failed Hamiltonian check, or
            a field whose dimension disagrees with the scenario
    """
    seed = s.run.seed if seed is None else int(seed)
    threads = threads or s.run.threads or thread_count()
    box = _scenario_box(s)
    field = build_field(s.field.name, s.field.params) if s.field is not None else None
    dim = s.dim or (field.dim if field is not None else None) or (box.dim if box is not None else None)
    action = build_action(s.action.to_spec(), field, dim, check_box=box, skip_checks=s.action.skip_checks,
                          seed=seed)
    declared = {d for d in (s.dim, field and field.dim, box and box.dim) if d}
    if declared - {action.dim}:
        raise ConfigError(f"Action has dimension {action.dim}, scenario declares {sorted(declared)}")
    drift = field if field is not None else action.drift
    manifolds = build_manifolds([m.to_spec() for m in s.manifolds], drift)
    logger.info("Scenario '%s': field=%s action=%s manifolds=%d seed=%d", s.name,
                drift.name if drift is not None else None, action.name, len(manifolds), seed)
    return ScenarioRuntime(s, drift, action, manifolds, box, seed, threads)


def build_endpoint(section: EndpointSection, rt: ScenarioRuntime) -> EndpointSet:
    if section.kind == EndpointKind.POINT:
        return EndpointSet.point(section.point)
    if section.kind == EndpointKind.SPHERE:
        return EndpointSet.sphere(section.center, section.radius)
    return EndpointSet.level_set(rt.manifold(section.manifold))


def build_problem(rt: ScenarioRuntime, nodes: Optional[int] = None, tol: Optional[float] = None) -> MinimizeProblem:
    """
    Minimization problem of the scenario; nodes and tol override the file

    Raises:
        ConfigError: No problem section, or an invalid problem
    """
    p = rt.scenario.problem
    if p is None:
        raise ConfigError(f"Scenario '{rt.scenario.name}' defines no problem")
    return MinimizeProblem(
        action=rt.action,
        start_set=build_endpoint(p.start, rt),
        end_set=build_endpoint(p.end, rt),
        nodes=p.nodes if nodes is None else int(nodes),
        box=p.box.to_box() if p.box is not None else rt.box,
        max_iters=p.max_iters,
        step0=p.step0,
        tol_S=p.tol_S if tol is None else float(tol),
        max_halvings=p.max_halvings,
        winding_center=tuple(p.winding_center) if p.winding_center is not None else None,
        seed=rt.seed,
    )


def build_initial_curve(rt: ScenarioRuntime, path: Optional[str] = None) -> Optional[Curve]:
    """Seed curve from path, else from problem.curve, else None"""
    path = path or (rt.scenario.problem.curve if rt.scenario.problem is not None else None)
    if path is None:
        return None
    return read_curve_csv(path, dim=rt.dim)


def build_criteria_options(rt: ScenarioRuntime) -> CriteriaOptions:
    c = rt.scenario.criteria
    params = dict(c.options) if c is not None else {}
    params.setdefault('seed', rt.seed)
    if 'holder_range' in params:
        params['holder_range'] = tuple(params['holder_range'])
    try:
        return CriteriaOptions(**params)
    except TypeError as exc:
        raise ConfigError(f"Bad criteria options: {exc}") from exc


def build_criteria_context(rt: ScenarioRuntime) -> CriteriaContext:
    """Checked, oriented manifolds plus equilibria and traced cycles"""
    c = rt.scenario.criteria
    search_box = c.search_box.to_box() if c is not None and c.search_box is not None else rt.box
    cycle_seeds: Sequence = c.cycle_seeds if c is not None else ()
    samples = c.admissibility_samples if c is not None else 64
    return build_context(rt.action, rt.field, rt.manifolds, search_box, cycle_seeds,
                         build_criteria_options(rt), admissibility_samples=samples)


def criteria_points(rt: ScenarioRuntime) -> np.ndarray:
    """Grid points (C order) followed by the listed points"""
    c = rt.scenario.criteria
    if c is None:
        raise ConfigError(f"Scenario '{rt.scenario.name}' defines no criteria section")
    blocks = []
    if c.grid is not None:
        blocks.append(GridSpec(c.grid.box.to_box(), tuple(c.grid.counts)).points())
    if c.points:
        blocks.append(np.asarray(c.points, dtype=float).reshape(-1, rt.dim))
    if not blocks:
        raise ConfigError("Criteria section has neither grid nor points")
    return np.vstack(blocks)


def build_verify_context(rt: ScenarioRuntime, nodes: Optional[int] = None,
                         tol: Optional[float] = None) -> VerifyContext:
    problem = build_problem(rt, nodes, tol) if rt.scenario.problem is not None else None
    return VerifyContext(rt.action, rt.field, rt.manifolds, problem, rt.box, rt.seed, rt.threads)


def build_runner_config(s: Scenario) -> RunnerConfig:
    """
    Raises:
        ConfigError: No verify section or a bad suite
    """
    if s.verify is None:
        raise ConfigError(f"Scenario '{s.name}' defines no verify section")
    return RunnerConfig(suites=[build_suite(suite.name, suite.params) for suite in s.verify.suites],
                        halt_on_critical=s.verify.halt_on_critical)


__all__ = [
    'ScenarioRuntime',
    'build_runtime',
    'build_endpoint',
    'build_problem',
    'build_initial_curve',
    'build_criteria_options',
    'build_criteria_context',
    'criteria_points',
    'build_verify_context',
    'build_runner_config',
]
