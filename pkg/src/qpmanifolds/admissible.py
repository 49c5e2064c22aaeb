"""
admissible.py

Sampled admissibility checks.

Zero-set points are located by bracketing sign changes along rays through
the bounding box and refining each bracket with brentq. At every point the
gradient of f_M must be nonzero and make a positive angle with b:
<grad f_M, b> > tol_angle |grad f_M| |b|. Both orientations are tried, so
the caller never has to fix the sign of f_M in advance.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from src.qpcore import DivergenceError, EmptyManifoldError, PreconditionError, make_rng, unit_directions
from src.qpfields import FlowField, FlowOptions, SWEEP_OPTIONS, flow

from .manifold import AdmissibleManifold

logger = logging.getLogger(__name__)

TOL_ANGLE = 1e-6
RAY_SAMPLES = 65
MAX_LISTED = 20
SIGN_TIMES = (-1.0, -0.5, -0.1, 0.1, 0.5, 1.0)


def _ray_exit(origin: np.ndarray, d: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> float:
    """Largest s with origin + s d inside [lo, hi]"""
    with np.errstate(divide='ignore', invalid='ignore'):
        upper = np.where(d > 0, (hi - origin) / d, np.where(d < 0, (lo - origin) / d, np.inf))
    return float(np.min(upper))


def _roots_on_ray(m: AdmissibleManifold, origin: np.ndarray, d: np.ndarray, per_ray: int) -> List[np.ndarray]:
    box = m.bounding_box
    s_max = _ray_exit(origin, d, box.lo, box.hi)
    if not np.isfinite(s_max) or s_max <= 0.0:
        return []
    s = np.linspace(0.0, s_max, per_ray)
    vals = m.values(origin[None, :] + s[:, None] * d[None, :])
    out = []
    for k in range(per_ray - 1):
        if vals[k] == 0.0:
            out.append(origin + s[k] * d)
        elif vals[k] * vals[k + 1] < 0.0:
            r = brentq(lambda u: m.value(origin + u * d), s[k], s[k + 1], xtol=1e-14, rtol=1e-14)
            out.append(origin + r * d)
    if vals[-1] == 0.0:
        out.append(origin + s[-1] * d)
    return out


def zero_set_points(m: AdmissibleManifold, samples: int = 64, seed: Optional[int] = None,
                    per_ray: int = RAY_SAMPLES) -> np.ndarray:
    """
    Points of f_M^{-1}({0}) found along rays inside the bounding box.

    Rays start at the box centre; when none of them brackets a root, rays
    from random interior points are tried as well.

    Raises:
        EmptyManifoldError: No sign change was bracketed
    """
    if samples < 1:
        raise PreconditionError(f"Sample count must be positive, got {samples}")
    rng = make_rng(seed)
    box = m.bounding_box
    dirs = unit_directions(m.dim, samples, rng)
    points: List[np.ndarray] = []
    for d in dirs:
        points += _roots_on_ray(m, box.center, d, per_ray)
    if not points:
        origins = box.sample(rng, samples)
        for origin, d in zip(origins, dirs[rng.integers(0, len(dirs), samples)]):
            points += _roots_on_ray(m, origin, d, per_ray)
    if not points:
        raise EmptyManifoldError(f"No zero-set point of manifold '{m.id}' found in its bounding box")
    return np.array(points)


@dataclass
class AdmissibilityReport:
    """
    Result of check_admissible

    Attributes:
        manifold_id: Manifold checked
        passed: Every sampled point passed and the zero set stayed in the box
        orientation: Sign that makes f_M admissible (0 when neither does)
        points_checked: Number of zero-set points
        worst_margin: Smallest oriented cosine between grad f_M and b
        contained: f_M keeps one sign on the box boundary (always True for
            non-compact manifolds)
        flip_pair: Points with cosines of opposite signs, when both occur
        failures: Up to MAX_LISTED failing points with their cosines
        tol_angle: Cosine threshold
        seed: Sampling seed
    """
    manifold_id: str
    passed: bool
    orientation: int
    points_checked: int
    worst_margin: float
    contained: bool
    flip_pair: Optional[Dict[str, List[float]]] = None
    failures: List[Dict[str, Any]] = field(default_factory=list)
    tol_angle: float = TOL_ANGLE
    seed: Optional[int] = None

    def to_dict(self) -> dict:
        return {'manifold_id': self.manifold_id, 'passed': self.passed, 'orientation': self.orientation,
                'points_checked': self.points_checked, 'worst_margin': self.worst_margin,
                'contained': self.contained, 'flip_pair': self.flip_pair, 'failures': self.failures,
                'tol_angle': self.tol_angle, 'seed': self.seed}


def _cosines(m: AdmissibleManifold, f: FlowField, Z: np.ndarray) -> np.ndarray:
    B = f.b_batch(Z)
    G = np.array([m.gradient(z) for z in Z])
    denom = np.linalg.norm(G, axis=1) * np.linalg.norm(B, axis=1)
    with np.errstate(divide='ignore', invalid='ignore'):
        cos = np.sum(G * B, axis=1) / denom
    # vanishing gradient or drift fails in both orientations
    return np.where(denom > 0.0, cos, np.nan)


def _contained(m: AdmissibleManifold, samples: int, seed: Optional[int]) -> bool:
    if not m.compact:
        return True
    box = m.bounding_box
    per_face = max(4, samples // (2 * m.dim))
    vals = m.values(np.vstack([box.boundary_points(per_face, make_rng(seed)),
                               box.lo[None], box.hi[None]]))
    return bool(np.all(vals > 0.0) or np.all(vals < 0.0))


def check_admissible(m: AdmissibleManifold, f: FlowField, samples: int = 64, seed: Optional[int] = 0,
                     tol_angle: float = TOL_ANGLE) -> AdmissibilityReport:
    """
    Check a manifold against a drift on sampled zero-set points.

    Args:
        m: Manifold (either orientation)
        f: Drift field
        samples: Number of rays
        seed: Sampling seed
        tol_angle: Required cosine between grad f_M and b

    Raises:
        PreconditionError: samples < 1
        EmptyManifoldError: No zero-set point found
    """
    Z = zero_set_points(m, samples, seed)
    cos = _cosines(m, f, Z)
    finite = np.isfinite(cos)
    safe = np.where(finite, cos, 0.0)
    orientation = 0
    if np.all(finite) and np.all(safe > tol_angle):
        orientation = 1
    elif np.all(finite) and np.all(safe < -tol_angle):
        orientation = -1
    oriented = safe * (orientation or (1 if np.sum(safe) >= 0.0 else -1))
    flip_pair = None
    if np.any(safe > tol_angle) and np.any(safe < -tol_angle):
        flip_pair = {'positive': Z[int(np.argmax(safe))].tolist(),
                     'negative': Z[int(np.argmin(safe))].tolist()}
    bad = np.flatnonzero(~finite | (oriented <= tol_angle))
    contained = _contained(m, samples, seed)
    report = AdmissibilityReport(
        manifold_id=m.id,
        passed=orientation != 0 and contained,
        orientation=orientation,
        points_checked=len(Z),
        worst_margin=float(np.min(np.where(finite, oriented, -np.inf))),
        contained=contained,
        flip_pair=flip_pair,
        failures=[{'point': Z[i].tolist(), 'cosine': None if not finite[i] else float(cos[i])}
                  for i in bad[:MAX_LISTED]],
        tol_angle=tol_angle,
        seed=seed,
    )
    if report.passed:
        logger.debug("check_admissible: '%s' passed on %d points (orientation %+d)",
                     m.id, len(Z), orientation)
    else:
        logger.info("check_admissible: '%s' failed (%d bad points, contained=%s)", m.id, len(bad), contained)
    return report


def orient_manifold(m: AdmissibleManifold, report: AdmissibilityReport) -> AdmissibleManifold:
    """
    Apply the orientation found by check_admissible.

    Raises:
        PreconditionError: The report did not pass
    """
    if not report.passed:
        raise PreconditionError(f"Manifold '{m.id}' is not admissible")
    return m.oriented(report.orientation)


def admissible(m: AdmissibleManifold, f: FlowField, samples: int = 64, seed: Optional[int] = 0) -> AdmissibleManifold:
    """check_admissible followed by orient_manifold"""
    return orient_manifold(m, check_admissible(m, f, samples, seed))


@dataclass
class SignInvariantReport:
    """sign(f_M(psi(x, t))) against sign(t) for x on M"""
    checked: int
    violations: List[Dict[str, Any]]
    skipped: int = 0

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {'checked': self.checked, 'violations': self.violations[:MAX_LISTED],
                'violation_count': len(self.violations), 'skipped': self.skipped, 'passed': self.passed}


def check_sign_invariant(m: AdmissibleManifold, f: FlowField, samples: int = 32, seed: Optional[int] = 0,
                         times: Sequence[float] = SIGN_TIMES,
                         opts: Optional[FlowOptions] = None) -> SignInvariantReport:
    """
    Flow sampled zero-set points for short times and compare signs.

    m must carry its admissible orientation. Trajectories that diverge are
    counted as skipped.
    """
    opts = opts or SWEEP_OPTIONS
    Z = zero_set_points(m, samples, seed)
    checked, skipped, violations = 0, 0, []
    for z in Z:
        for t in times:
            try:
                y = flow(f, z, float(t), opts)
            except DivergenceError:
                skipped += 1
                continue
            checked += 1
            v = m.value(y)
            if np.sign(v) != np.sign(t):
                violations.append({'point': z.tolist(), 't': float(t), 'value': v})
    if violations:
        logger.info("check_sign_invariant: %d violations on '%s'", len(violations), m.id)
    return SignInvariantReport(checked, violations, skipped)
