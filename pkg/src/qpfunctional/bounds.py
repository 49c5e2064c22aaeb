"""
bounds.py

Global bounds on the geometric action.

Upper bound: S(gamma) <= B(K) length(gamma), with B(K) = 1 + max of
l(x, y) over x in K and unit y. Lower bound: an action with drift b and
constant A satisfies l(x, y) >= A (|b||y| - <b, y>).
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from src.qpactions import LocalAction
from src.qpcore import Box, ConfigError, DomainError, make_rng, unit_directions
from src.qpcurves import Curve, as_curve, curve_length
from src.qpfields import FlowField

from .action import geometric_action

logger = logging.getLogger(__name__)

LOWER_BOUND_TOL = 1e-9
MAX_LISTED = 50


def bound_constant(a: LocalAction, K: Box, directions: int = 64, samples: int = 256,
                   extra_points=None, seed: int = 0) -> float:
    """
    Sampled B(K) = 1 + max over K x unit sphere of l(x, y).

    Args:
        a: Local action
        K: Compact box
        directions: Unit directions (equally spaced in 2-D)
        samples: Sobol points in K
        extra_points: Additional points of K to include (e.g. curve midpoints)
        seed: Sobol scrambling seed
    """
    X = np.vstack([K.sobol(samples, seed), K.lo[None], K.hi[None]])
    if extra_points is not None and len(extra_points):
        X = np.vstack([X, np.asarray(extra_points, dtype=float).reshape(-1, K.dim)])
    D = unit_directions(K.dim, directions, make_rng(seed))
    XX = np.repeat(X, len(D), axis=0)
    DD = np.tile(D, (len(X), 1))
    return 1.0 + float(np.max(a.evaluate_batch(XX, DD)))


@dataclass
class BoundReport:
    """Report record {value, bound, margin, worst_sample}"""
    value: float
    bound: float
    worst_sample: Optional[List[float]] = None
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return self.bound - self.value

    def to_dict(self) -> dict:
        out = {'value': self.value, 'bound': self.bound, 'margin': self.margin,
               'worst_sample': self.worst_sample}
        out.update(self.extra)
        return out


def _check_inside(c: Curve, K: Box) -> None:
    if not K.contains_all(c.nodes, tol=1e-12):
        outside = c.nodes[~np.all((c.nodes >= K.lo - 1e-12) & (c.nodes <= K.hi + 1e-12), axis=1)]
        raise DomainError(f"Curve leaves K at {outside[0].tolist()}")


def action_upper_bound(a: LocalAction, c: Curve, K: Box, directions: int = 64, samples: int = 256) -> float:
    """
    B(K) times the length of c.

    Raises:
        DomainError: c leaves K
    """
    c = as_curve(c)
    _check_inside(c, K)
    length = curve_length(c)
    if length == 0.0:
        return 0.0
    return bound_constant(a, K, directions, samples, extra_points=c.midpoints()) * length


def upper_bound_report(a: LocalAction, c: Curve, K: Box, directions: int = 64,
                       samples: int = 256) -> BoundReport:
    """S(c) next to its upper bound"""
    c = as_curve(c)
    bound = action_upper_bound(a, c, K, directions, samples)
    value = geometric_action(a, c)
    return BoundReport(value, bound, extra={'length': curve_length(c)})


@dataclass
class DriftBoundReport:
    """
    Sampled check of l(x, y) >= A (|b||y| - <b, y>)

    Attributes:
        A_const: Constant tested
        samples: Number of (x, y) pairs
        worst_margin: Smallest l - A (|b||y| - <b, y>)
        worst_sample: (x, y) of the smallest margin
        violations: Up to MAX_LISTED violating samples
        violation_count: Total number of violations
        tol: Margin tolerance
    """
    A_const: float
    samples: int
    worst_margin: float
    worst_sample: Dict[str, List[float]]
    violations: List[Dict[str, Any]]
    violation_count: int
    tol: float = LOWER_BOUND_TOL

    @property
    def passed(self) -> bool:
        return self.violation_count == 0

    def to_dict(self) -> dict:
        return {'A_const': self.A_const, 'samples': self.samples, 'worst_margin': self.worst_margin,
                'worst_sample': self.worst_sample, 'violations': self.violations,
                'violation_count': self.violation_count, 'tol': self.tol, 'passed': self.passed}


def drift_lower_bound_check(a: LocalAction, f: FlowField, A_const: float, K: Box, samples: int = 1000,
                            seed: Optional[int] = None, tol: float = LOWER_BOUND_TOL) -> DriftBoundReport:
    """
    Test the drift lower bound on random (x, y) in K x R^n.

    Violations are listed in the report; nothing is raised for them.

    Raises:
        ConfigError: samples < 1 or A_const <= 0
    """
    if samples < 1:
        raise ConfigError(f"Sample count must be positive, got {samples}")
    if A_const <= 0.0:
        raise ConfigError(f"Drift constant must be positive, got {A_const}")
    rng = make_rng(seed)
    X = K.sample(rng, samples)
    Y = rng.standard_normal((samples, K.dim))
    B = f.b_batch(X)
    rhs = A_const * (np.linalg.norm(B, axis=1) * np.linalg.norm(Y, axis=1) - np.sum(B * Y, axis=1))
    margins = a.evaluate_batch(X, Y) - rhs
    bad = np.flatnonzero(margins < -tol)
    k = int(np.argmin(margins))
    report = DriftBoundReport(
        A_const=A_const,
        samples=samples,
        worst_margin=float(margins[k]),
        worst_sample={'x': X[k].tolist(), 'y': Y[k].tolist()},
        violations=[{'x': X[i].tolist(), 'y': Y[i].tolist(), 'margin': float(margins[i])}
                    for i in bad[:MAX_LISTED]],
        violation_count=int(bad.size),
        tol=tol,
    )
    if bad.size:
        logger.info("drift_lower_bound_check: %d of %d samples violate A=%.6g", bad.size, samples, A_const)
    return report
