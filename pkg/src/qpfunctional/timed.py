"""
timed.py

The time-parameterized action S_T(chi) = int_0^T L(chi, chi') dt and its
comparison with the geometric action.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.qpactions import Hamiltonian, legendre_lagrangian_batch
from src.qpcore import ConfigError, pairwise_sum
from src.qpcurves import Curve, as_curve, curve_length, resample_fractions

from .action import hamiltonian_action

logger = logging.getLogger(__name__)

DOUBLE_INF_TOL = 1e-6


def time_action(h: Hamiltonian, times, samples) -> float:
    """
    Trapezoid sum of L(chi, chi') dt with forward-difference velocities.

    On each interval the velocity is (chi_{k+1} - chi_k) / dt_k and L is
    averaged over the two interval endpoints.

    Args:
        h: Hamiltonian (L is its Legendre transform)
        times: Strictly increasing timestamps, at least 2
        samples: (len(times), n) path samples

    Raises:
        ConfigError: Fewer than 2 samples, shape mismatch or non-increasing times
    """
    t = np.asarray(times, dtype=float).reshape(-1)
    X = np.asarray(samples, dtype=float).reshape(len(t), -1)
    if len(t) < 2:
        raise ConfigError("time_action needs at least 2 samples")
    dt = np.diff(t)
    if np.any(dt <= 0.0):
        raise ConfigError("Timestamps must be strictly increasing")
    V = np.diff(X, axis=0) / dt[:, None]
    left = legendre_lagrangian_batch(h, X[:-1], V)
    right = legendre_lagrangian_batch(h, X[1:], V)
    return pairwise_sum(0.5 * (left + right) * dt)


def constant_speed_parameterization(c: Curve, T: float, samples: int = 201) -> Tuple[np.ndarray, np.ndarray]:
    """
    Timestamps and positions of c traversed at constant speed on [0, T].

    The corners of c are kept as extra samples, so the sampled path is the
    polyline of c itself.

    Returns:
        (times, points); times contain linspace(0, T, samples)
    """
    if T <= 0.0:
        raise ConfigError(f"T must be positive, got {T}")
    if samples < 2:
        raise ConfigError(f"Need at least 2 samples, got {samples}")
    fractions = np.linspace(0.0, 1.0, samples)
    c = as_curve(c)
    total = curve_length(c)
    if total <= 0.0:
        return T * fractions, np.repeat(c.nodes[:1], samples, axis=0)
    fractions = np.unique(np.concatenate([fractions, c.cumulative() / total]))
    fractions = fractions[np.concatenate([[True], np.diff(fractions) > 1e-12])]
    fractions[0], fractions[-1] = 0.0, 1.0
    points = resample_fractions(c, fractions).nodes
    return T * fractions, points


@dataclass
class DoubleInfReport:
    """
    Geometric action against constant-speed time actions

    Attributes:
        geometric: S(c)
        T_grid: Durations tried
        time_actions: S_T of the constant-speed parameterization per duration
        tol: Allowed excess of S over the grid minimum
    """
    geometric: float
    T_grid: List[float]
    time_actions: List[float]
    tol: float = DOUBLE_INF_TOL

    @property
    def minimum(self) -> float:
        return float(min(self.time_actions))

    @property
    def argmin(self) -> float:
        return float(self.T_grid[int(np.argmin(self.time_actions))])

    @property
    def consistent(self) -> bool:
        return self.geometric <= self.minimum + self.tol

    def to_dict(self) -> dict:
        return {'geometric': self.geometric, 'T_grid': self.T_grid, 'time_actions': self.time_actions,
                'minimum': self.minimum, 'argmin': self.argmin, 'tol': self.tol,
                'consistent': self.consistent}


def compare_double_inf(h: Hamiltonian, c: Curve, T_grid: Sequence[float], samples: int = 201,
                       tol: float = DOUBLE_INF_TOL, seed: Optional[int] = None) -> DoubleInfReport:
    """
    Compare S(c) with min over T of S_T at constant speed.

    The geometric action is an infimum over all durations and
    parameterizations, so it never exceeds any grid value (up to tol);
    a violation is reported, not raised.
    """
    if len(T_grid) == 0:
        raise ConfigError("T_grid is empty")
    geometric = hamiltonian_action(h, c, seed=seed)
    values = []
    for T in T_grid:
        times, points = constant_speed_parameterization(c, float(T), samples)
        values.append(time_action(h, times, points))
    report = DoubleInfReport(geometric, [float(T) for T in T_grid], values, tol)
    if not report.consistent:
        logger.warning("compare_double_inf: S=%.9g exceeds grid minimum %.9g", geometric, report.minimum)
    return report
