"""
props.py

The pointwise existence criteria.

- check_prop0: l(x, .) positive on every direction gives strong local
  minimizers at x.
- check_prop1: x on the flowline through an admissible manifold gives
  strong local minimizers.
- check_prop2: equilibria; attractors and repellors always have weak local
  minimizers, planar saddles when all four invariant-manifold branches
  reach admissible manifolds. The Hoelder regression upgrades to strong.
- check_local_root: critical points of actions without a drift (roots of
  an Agmon potential) borrow a cut-off repelling drift and go through the
  repellor case.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from src.qpactions import (
    ActionVariant,
    LocalAction,
    h0_plus,
    local_drift_near_root,
)
from src.qpcore import Box, ConfigError, PreconditionError, as_point, make_rng, unit_directions
from src.qpfields import (
    DEFAULT_OPTIONS,
    Equilibrium,
    EquilibriumKind,
    FlowField,
    FlowOptions,
    make_equilibrium,
    trace_invariant_manifolds_2d,
)
from src.qpfunctional import drift_lower_bound_check
from src.qpmanifolds import AdmissibleManifold, locate

from .holder import HOLDER_RADII, HOLDER_RANGE, R2_MIN, SLOPE_MIN, check_holder, holder_fit
from .verdicts import CriteriaVerdict, Criterion, Verdict

logger = logging.getLogger(__name__)

TOL_POS = 1e-8
MIN_DIRECTIONS = 8
CROSSING_TOL = 1e-8
ROOT_SAMPLES = 512
# fraction of the sampled constant passed to the fresh-sample check
ROOT_SAFETY = 0.9


@dataclass(frozen=True)
class CriteriaOptions:
    """
    Tunables shared by the criteria

    Attributes:
        directions: Unit directions sampled by check_prop0
        tol_pos: Positivity threshold of check_prop0
        t_max: Time budget of the crossing search in each direction
        scale: Length scale of the Hoelder radii
        arc_budget: Arclength traced along each saddle branch
        e_condition: Whether the scenario declares the state-constraint
            condition of the strong upgrade satisfied
        holder_radii: Radii of the Hoelder regression
        holder_range: Radius range of the regression before scaling
        slope_min: Smallest accepted Hoelder exponent
        r2_min: Smallest accepted coefficient of determination
        root_radius: Cut-off radius of the drift borrowed at potential roots
        eq_tol: Distance within which a point is matched to a known equilibrium
        cycle_band: Distance to a traced limit cycle counted as on the cycle
        seed: Seed for every sampled direction
        flow: Integrator options for the crossing searches
    """
    directions: int = 64
    tol_pos: float = TOL_POS
    t_max: float = 1e3
    scale: float = 1.0
    arc_budget: float = 3.0
    e_condition: bool = True
    holder_radii: int = HOLDER_RADII
    holder_range: Tuple[float, float] = HOLDER_RANGE
    slope_min: float = SLOPE_MIN
    r2_min: float = R2_MIN
    root_radius: float = 0.1
    eq_tol: float = 1e-6
    cycle_band: float = 1e-4
    seed: Optional[int] = 0
    flow: FlowOptions = field(default=DEFAULT_OPTIONS)

    def __post_init__(self):
        if self.directions < MIN_DIRECTIONS:
            raise ConfigError(f"At least {MIN_DIRECTIONS} directions are needed, got {self.directions}")
        if self.t_max <= 0 or self.scale <= 0 or self.arc_budget <= 0 or self.root_radius <= 0:
            raise ConfigError(f"t_max, scale, arc_budget and root_radius must be positive: {self}")

    def to_dict(self) -> dict:
        return {
            'directions': self.directions, 'tol_pos': self.tol_pos, 't_max': self.t_max,
            'scale': self.scale, 'arc_budget': self.arc_budget, 'e_condition': self.e_condition,
            'holder_radii': self.holder_radii, 'holder_range': list(self.holder_range),
            'slope_min': self.slope_min, 'r2_min': self.r2_min, 'root_radius': self.root_radius,
            'eq_tol': self.eq_tol, 'cycle_band': self.cycle_band, 'seed': self.seed,
            'flow': self.flow.to_dict(),
        }


DEFAULT_CRITERIA = CriteriaOptions()


def _point(x) -> Tuple[float, ...]:
    return tuple(float(v) for v in x)


def check_prop0(a: LocalAction, x, directions: int = 64, tol_pos: float = TOL_POS,
                seed: Optional[int] = 0) -> Optional[CriteriaVerdict]:
    """
    Strong verdict when l(x, y) > tol_pos for every sampled unit y.

    The direction of the drift is always among the samples for actions
    that carry one.

    Hamiltonian actions use H(x, 0) < -tol_pos instead, which is equivalent
    and avoids the theta solver.

    Raises:
        PreconditionError: directions < 8
    """
    if directions < MIN_DIRECTIONS:
        raise PreconditionError(f"check_prop0 needs at least {MIN_DIRECTIONS} directions, got {directions}")
    x = as_point(x, a.dim)
    if a.variant == ActionVariant.HAMILTONIAN:
        H0 = float(a.hamiltonian.at_origin(x)[0][0])
        if H0 < -tol_pos:
            return CriteriaVerdict(_point(x), Verdict.STRONG, Criterion.PROP0, {'H0': H0}, margin=-H0)
        return None
    Y = unit_directions(a.dim, directions, make_rng(seed))
    if a.has_drift:
        # drift-based actions vanish along b(x), which the sampled directions miss
        bx = a.drift.b(x)
        nb = float(np.linalg.norm(bx))
        if nb > 0.0:
            Y = np.vstack([Y, bx / nb])
    values = a.evaluate_batch(np.repeat(x[None, :], len(Y), axis=0), Y)
    k = int(np.argmin(values))
    lowest = float(values[k])
    if lowest > tol_pos:
        evidence = {'min_action': lowest, 'direction': Y[k].tolist(), 'directions': len(Y)}
        return CriteriaVerdict(_point(x), Verdict.STRONG, Criterion.PROP0, evidence, margin=lowest)
    return None


def check_prop1(f: FlowField, manifolds: Sequence[AdmissibleManifold], x, t_max: float = 1e3,
                opts: Optional[FlowOptions] = None) -> Optional[CriteriaVerdict]:
    """
    Strong verdict when the flowline through x crosses one of the manifolds.

    The manifolds are taken as admissible (check_admissible passed). The
    first manifold in list order whose zero set is reached within t_max,
    forward or backward, is reported with the crossing time t and foot
    point z = psi(x, -t).
    """
    opts = opts or DEFAULT_OPTIONS
    x = as_point(x, f.dim)
    if f.speed(x) < opts.stall_tol:
        return None
    for m in manifolds:
        found = locate(m, f, x, t_max, opts)
        if found is None:
            continue
        residual = abs(m.value(found.z))
        if residual >= CROSSING_TOL:
            logger.warning("check_prop1: crossing of '%s' from %s has residual %.3g", m.id, x.tolist(), residual)
            continue
        evidence = {'manifold_id': m.id, 'crossing_time': float(found.t), 'foot_point': found.z.tolist(),
                    'arclength': float(found.arclength), 'level_residual': residual}
        return CriteriaVerdict(_point(x), Verdict.STRONG, Criterion.PROP1, evidence, margin=abs(float(found.t)))
    return None


@dataclass(frozen=True)
class SaddleCoverage:
    """Manifold reached by each invariant-manifold branch of a saddle (None when none is)"""
    branches: Dict[str, Optional[str]]

    @property
    def covered(self) -> bool:
        return bool(self.branches) and all(v is not None for v in self.branches.values())

    def to_dict(self) -> dict:
        return {'branches': dict(self.branches), 'covered': self.covered}


def saddle_coverage(f: FlowField, saddle: Equilibrium, manifolds: Sequence[AdmissibleManifold],
                    opts: CriteriaOptions = DEFAULT_CRITERIA) -> SaddleCoverage:
    """
    Which manifold each of the four branches of a planar saddle crosses.

    The crossing search starts halfway along the traced branch and runs both
    ways, so it covers the whole flowline of the branch, not only the traced
    piece.
    """
    traced = trace_invariant_manifolds_2d(f, saddle, opts.arc_budget, scale=opts.scale, opts=opts.flow)
    out: Dict[str, Optional[str]] = {}
    for name, branch in zip(traced._fields, traced.branches()):
        mid = branch.nodes[len(branch) // 2]
        out[name] = None
        for m in manifolds:
            if locate(m, f, mid, opts.t_max, opts.flow) is not None:
                out[name] = m.id
                break
    return SaddleCoverage(out)


def _upgrade(a: LocalAction, eq: Equilibrium, criterion: Criterion, evidence: dict,
             opts: CriteriaOptions) -> CriteriaVerdict:
    fit = holder_fit(a, eq.point, scale=opts.scale, radii=opts.holder_radii, radius_range=opts.holder_range,
                     seed=opts.seed, slope_min=opts.slope_min, r2_min=opts.r2_min)
    evidence['holder'] = fit.to_dict()
    evidence['e_condition'] = opts.e_condition
    evidence.setdefault('holder_data', check_holder(a.hamiltonian, eq.point).to_dict())
    strong = fit.passed and opts.e_condition
    margin = 0.0 if fit.slope is None else fit.slope
    return CriteriaVerdict(_point(eq.point), Verdict.STRONG if strong else Verdict.WEAK, criterion,
                           evidence, margin=margin)


def check_prop2(f: FlowField, a: LocalAction, eq: Equilibrium, manifolds: Sequence[AdmissibleManifold],
                opts: Optional[CriteriaOptions] = None) -> Optional[CriteriaVerdict]:
    """
    Verdict at an equilibrium.

    Attractors and repellors are weak, saddles (planar only) are weak when
    every branch reaches a manifold. Either becomes strong when the Hoelder
    regression passes and the state-constraint condition is declared.
    Degenerate equilibria and saddles in more than two dimensions get no
    verdict; the reason is logged.
    """
    opts = opts or DEFAULT_CRITERIA
    evidence = {'equilibrium': eq.to_dict()}
    if eq.kind == EquilibriumKind.DEGENERATE:
        logger.warning("check_prop2: degenerate equilibrium at %s, eigenvalues %s",
                       list(eq.location), [complex(v) for v in eq.eigenvalues])
        return None
    if eq.kind == EquilibriumKind.ATTRACTOR:
        return _upgrade(a, eq, Criterion.PROP2_ATTRACTOR, evidence, opts)
    if eq.kind == EquilibriumKind.REPELLOR:
        return _upgrade(a, eq, Criterion.PROP2_REPELLOR, evidence, opts)
    if f.dim != 2:
        logger.info("check_prop2: saddle at %s in dim %d; coverage and the strong upgrade are left open",
                    list(eq.location), f.dim)
        return None
    coverage = saddle_coverage(f, eq, manifolds, opts)
    if not coverage.covered:
        logger.debug("check_prop2: saddle at %s not covered: %s", list(eq.location), coverage.branches)
        return None
    evidence['coverage'] = coverage.to_dict()
    return _upgrade(a, eq, Criterion.PROP2_SADDLE, evidence, opts)


def _root_drift_constant(a: LocalAction, b: FlowField, K: Box, rng: np.random.Generator) -> float:
    """Smallest sampled l(w, y) / (|b||y| - <b, y>) over K x unit directions"""
    W = K.sample(rng, ROOT_SAMPLES)
    Y = rng.standard_normal((ROOT_SAMPLES, a.dim))
    Y /= np.linalg.norm(Y, axis=1, keepdims=True)
    B = b.b_batch(W)
    denom = np.linalg.norm(B, axis=1) - np.sum(B * Y, axis=1)
    keep = denom > 1e-12
    if not np.any(keep):
        return 0.0
    return float(np.min(a.evaluate_batch(W[keep], Y[keep]) / denom[keep]))


def check_local_root(a: LocalAction, x, opts: Optional[CriteriaOptions] = None) -> Optional[CriteriaVerdict]:
    """
    Verdict at a critical point of an action whose H(x, 0) is not identically 0.

    A cut-off repelling drift is centred at x; when the action dominates it
    with a positive sampled constant A (checked again on fresh samples) the
    point is a repellor of that drift and goes through the prop2 repellor
    case. Needs l to grow at least linearly away from x.
    """
    opts = opts or DEFAULT_CRITERIA
    x = as_point(x, a.dim)
    if h0_plus(a):
        return None
    holder_data = check_holder(a.hamiltonian, x)
    if not holder_data:
        return None
    radius = opts.root_radius * opts.scale
    b = local_drift_near_root(x, radius)
    K = Box.around(x, 0.5 * radius)
    rng = make_rng(opts.seed)
    A = min(0.5, ROOT_SAFETY * _root_drift_constant(a, b, K, rng))
    if A <= opts.tol_pos:
        logger.info("check_local_root: no drift constant at %s (sampled %.3g)", x.tolist(), A)
        return None
    report = drift_lower_bound_check(a, b, A, K, samples=ROOT_SAMPLES, seed=int(rng.integers(2 ** 31)))
    if not report.passed:
        logger.info("check_local_root: A=%.4g fails on fresh samples at %s", A, x.tolist())
        return None
    eq = make_equilibrium(b, x)
    evidence = {'equilibrium': eq.to_dict(), 'local_drift': dict(b.params), 'A_const': A,
                'drift_bound': report.to_dict(), 'holder_data': holder_data.to_dict()}
    return _upgrade(a, eq, Criterion.PROP2_REPELLOR, evidence, opts)
