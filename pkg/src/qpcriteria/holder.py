"""
holder.py

Shrinking-ball regression for the Hoelder bound l(w, y) <= C |w - x|^delta |y|.

For each of a handful of log-spaced radii r the largest sampled l(w, y) with
|w - x| = r and |y| = 1 is recorded; a straight line through
(log r, log sup l) gives delta as its slope.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.stats import linregress

from src.qpactions import TOL_CRIT, Hamiltonian, LocalAction, critical_margin, is_critical_point
from src.qpcore import ConfigError, as_point, make_rng, unit_directions

logger = logging.getLogger(__name__)

HOLDER_RADII = 8
HOLDER_RANGE = (1e-4, 1e-1)
SLOPE_MIN = 0.1
R2_MIN = 0.99
HOLDER_DIRECTIONS = 32
# sup l below this at every radius counts as l == 0 near x
ZERO_ACTION = 1e-14
HOLDER_ASSUMPTION = "H and its theta-derivative are locally Hoelder continuous in x"


@dataclass(frozen=True)
class HolderFit:
    """
    Result of the shrinking-ball regression

    Attributes:
        radii: Radii sampled
        sup_values: Largest sampled l(w, y) per radius
        slope: Fitted exponent delta (None when l vanished everywhere)
        constant: Fitted C = exp(intercept)
        r2: Coefficient of determination of the fit
        passed: slope >= slope_min and r2 >= r2_min, or l identically zero
    """
    radii: Tuple[float, ...]
    sup_values: Tuple[float, ...]
    slope: Optional[float]
    constant: Optional[float]
    r2: Optional[float]
    passed: bool

    def to_dict(self) -> dict:
        return {'radii': list(self.radii), 'sup_values': list(self.sup_values), 'slope': self.slope,
                'constant': self.constant, 'r2': self.r2, 'passed': self.passed}


def holder_fit(a: LocalAction, x, scale: float = 1.0, radii: int = HOLDER_RADII,
               radius_range: Tuple[float, float] = HOLDER_RANGE, directions: int = HOLDER_DIRECTIONS,
               seed: Optional[int] = 0, slope_min: float = SLOPE_MIN, r2_min: float = R2_MIN) -> HolderFit:
    """
    Fit l(w, y) <= C |w - x|^delta |y| on shrinking spheres around x.

    Args:
        a: Local action
        x: Centre (an equilibrium or root)
        scale: Length scale multiplying radius_range
        radii: Number of log-spaced radii
        radius_range: Smallest and largest radius before scaling
        directions: Points per sphere and unit directions y per point
        seed: Seed for the sample directions in dim > 2
        slope_min: Smallest accepted exponent
        r2_min: Smallest accepted coefficient of determination

    Raises:
        ConfigError: Fewer than two radii or an empty radius range
    """
    lo, hi = radius_range
    if radii < 2:
        raise ConfigError(f"The Hoelder fit needs at least two radii, got {radii}")
    if not 0.0 < lo < hi or scale <= 0.0:
        raise ConfigError(f"Bad radius range {radius_range} or scale {scale}")
    x = as_point(x, a.dim)
    rng = make_rng(seed)
    U = unit_directions(a.dim, directions, rng)
    Y = unit_directions(a.dim, directions, rng)
    rs = np.geomspace(lo * scale, hi * scale, radii)
    sups = []
    for r in rs:
        W = x + r * U
        X = np.repeat(W, len(Y), axis=0)
        Yr = np.tile(Y, (len(W), 1))
        sups.append(float(np.max(a.evaluate_batch(X, Yr))))
    sups = np.asarray(sups)
    positive = sups > ZERO_ACTION
    if not np.any(positive):
        return HolderFit(tuple(rs.tolist()), tuple(sups.tolist()), None, None, None, True)
    if np.count_nonzero(positive) < 2:
        logger.info("holder_fit: l vanishes at all but one radius around %s", x.tolist())
        return HolderFit(tuple(rs.tolist()), tuple(sups.tolist()), None, None, None, False)
    fit = linregress(np.log(rs[positive]), np.log(sups[positive]))
    slope, r2 = float(fit.slope), float(fit.rvalue ** 2)
    passed = slope >= slope_min and r2 >= r2_min
    logger.debug("holder_fit at %s: slope %.4f, r2 %.6f", x.tolist(), slope, r2)
    return HolderFit(tuple(rs.tolist()), tuple(sups.tolist()), slope, float(np.exp(fit.intercept)), r2, passed)


@dataclass(frozen=True)
class HolderCheck:
    """
    Outcome of check_holder; truthy exactly when the bound holds at x

    Attributes:
        holds: x is a critical point of H
        critical_margin: max(|H(x, 0)|, |H_theta(x, 0)|)
        tol: Critical-point threshold used
        assumption: Data assumption under which holds is equivalent to the bound
    """
    holds: bool
    critical_margin: float
    tol: float
    assumption: str = HOLDER_ASSUMPTION

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        return {'holds': self.holds, 'critical_margin': self.critical_margin, 'tol': self.tol,
                'assumption': self.assumption}


def check_holder(h: Hamiltonian, x, tol: float = TOL_CRIT) -> HolderCheck:
    """
    For a Hamiltonian with Hoelder continuous data the bound holds at x
    exactly when x is a critical point. The assumption travels with the
    result so verdicts can record it.
    """
    x = as_point(x, h.dim)
    check = HolderCheck(is_critical_point(h, x, tol), critical_margin(h, x), tol)
    logger.debug("check_holder at %s: %s (margin %.3g, assuming Hoelder data)",
                 x.tolist(), check.holds, check.critical_margin)
    return check
