"""
local.py

Local actions l(x, y): nonnegative, 1-homogeneous and convex in y.

Closed-form variants (Randers-type SDE actions, Riemannian and Agmon
metrics) are evaluated directly; the Hamiltonian variant goes through the
theta solver. Every variant carries a companion Hamiltonian, so the
critical-point test and the H(x, 0) = 0 check work uniformly.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Optional

import numpy as np

from src.qpcore import Box, ConfigError, DomainError, make_rng
from src.qpfields import FlowField

from .hamiltonians import (
    Hamiltonian,
    MatrixSpec,
    agmon_hamiltonian,
    check_spd,
    matrix_field,
    natural_drift,
    riemannian_hamiltonian,
    sde_hamiltonian,
)
from .theta import solve_theta_batch

logger = logging.getLogger(__name__)

U_FLOOR = -1e-14


class ActionVariant(str, Enum):
    """Closed-form and Hamiltonian-induced action families"""
    SDE_RANDERS = 'sde_randers'
    SDE_GENERAL = 'sde_general'
    RIEMANNIAN = 'riemannian'
    AGMON = 'agmon'
    HAMILTONIAN = 'hamiltonian'


@dataclass(frozen=True)
class LocalAction:
    """
    A local action and the data its variant needs

    Attributes:
        variant: Action family
        dim: State dimension
        hamiltonian: Companion Hamiltonian (defines the action for the hamiltonian variant)
        drift: Drift b for SDE variants, natural drift for Hamiltonian ones, None otherwise
        metric: Batched A(x), (N, n) -> (N, n, n), for sde_general / riemannian
        potential: Batched U(x) >= 0, (N, n) -> (N,), for agmon
        params: Construction parameters (for reports)
        seed: Seed of the theta solver restarts
    """
    variant: ActionVariant
    dim: int
    hamiltonian: Hamiltonian
    drift: Optional[FlowField] = None
    metric: Optional[Callable[[np.ndarray], np.ndarray]] = None
    potential: Optional[Callable[[np.ndarray], np.ndarray]] = None
    params: Dict[str, Any] = field(default_factory=dict)
    seed: Optional[int] = None

    @property
    def name(self) -> str:
        return self.variant.value

    @property
    def has_drift(self) -> bool:
        return self.drift is not None

    def evaluate_batch(self, X, Y) -> np.ndarray:
        """l(x_k, y_k) for (N, n) arrays of points and directions"""
        X = np.asarray(X, dtype=float).reshape(-1, self.dim)
        Y = np.asarray(Y, dtype=float).reshape(-1, self.dim)
        if X.shape[0] == 0:
            return np.zeros(0)
        evaluator = _EVALUATORS[self.variant]
        return evaluator(self, X, Y)

    def __call__(self, x, y) -> float:
        return float(self.evaluate_batch(x, y)[0])

    def to_dict(self) -> Dict[str, Any]:
        return {
            'variant': self.variant.value,
            'dim': self.dim,
            'params': dict(self.params),
            'drift': None if self.drift is None else self.drift.to_dict(),
            'hamiltonian': self.hamiltonian.to_dict(),
        }


def _randers(a: LocalAction, X, Y):
    B = a.drift.b_batch(X)
    val = np.linalg.norm(B, axis=1) * np.linalg.norm(Y, axis=1) - np.sum(B * Y, axis=1)
    return np.maximum(val, 0.0)


def _metric(a: LocalAction, X):
    A = a.metric(X)
    check_spd(A)
    return A


def _sde_general(a: LocalAction, X, Y):
    B = a.drift.b_batch(X)
    A = _metric(a, X)
    Ainv_b = np.linalg.solve(A, B[..., None])[..., 0]
    Ainv_y = np.linalg.solve(A, Y[..., None])[..., 0]
    nb = np.sqrt(np.maximum(np.sum(B * Ainv_b, axis=1), 0.0))
    ny = np.sqrt(np.maximum(np.sum(Y * Ainv_y, axis=1), 0.0))
    return np.maximum(nb * ny - np.sum(B * Ainv_y, axis=1), 0.0)


def _riemannian(a: LocalAction, X, Y):
    A = _metric(a, X)
    return np.sqrt(np.maximum(np.einsum('ni,nij,nj->n', Y, A, Y), 0.0))


def _agmon(a: LocalAction, X, Y):
    U = np.asarray(a.potential(X), dtype=float).reshape(-1)
    if np.any(U < U_FLOOR):
        k = int(np.argmin(U))
        raise DomainError(f"U(x) = {U[k]:.3e} < 0 at x = {X[k].tolist()}")
    return np.sqrt(2.0 * np.maximum(U, 0.0)) * np.linalg.norm(Y, axis=1)


def _hamiltonian(a: LocalAction, X, Y):
    sol = solve_theta_batch(a.hamiltonian, X, Y, seed=a.seed)
    return np.sum(Y * sol.theta, axis=1)


_EVALUATORS = {
    ActionVariant.SDE_RANDERS: _randers,
    ActionVariant.SDE_GENERAL: _sde_general,
    ActionVariant.RIEMANNIAN: _riemannian,
    ActionVariant.AGMON: _agmon,
    ActionVariant.HAMILTONIAN: _hamiltonian,
}


def sde_randers_action(drift: FlowField) -> LocalAction:
    """l(x, y) = |b||y| - <b, y> (additive isotropic noise)"""
    return LocalAction(ActionVariant.SDE_RANDERS, drift.dim, sde_hamiltonian(drift), drift=drift,
                       params={'field': drift.to_dict()})


def sde_general_action(drift: FlowField, A: MatrixSpec) -> LocalAction:
    """l(x, y) = |b|_{A^-1} |y|_{A^-1} - <b, y>_{A^-1}"""
    n = drift.dim
    return LocalAction(ActionVariant.SDE_GENERAL, n, sde_hamiltonian(drift, A), drift=drift,
                       metric=matrix_field(A, n), params={'field': drift.to_dict()})


def riemannian_action(A: MatrixSpec = None, dim: int = 2) -> LocalAction:
    """l(x, y) = sqrt(y^T A(x) y); natural drift 0"""
    h = riemannian_hamiltonian(A, dim)
    return LocalAction(ActionVariant.RIEMANNIAN, h.dim, h, metric=matrix_field(A, h.dim),
                       params=dict(h.params))


def agmon_action(U: Callable[[np.ndarray], np.ndarray], dim: int,
                 params: Optional[Dict[str, Any]] = None) -> LocalAction:
    """l(x, y) = sqrt(2 U(x)) |y| for a batched potential U >= 0"""
    return LocalAction(ActionVariant.AGMON, dim, agmon_hamiltonian(U, dim), potential=U,
                       params=params or {})


def from_hamiltonian(h: Hamiltonian, seed: Optional[int] = None) -> LocalAction:
    """
    l(x, y) = <y, theta_hat(x, y)> for a Hamiltonian satisfying the sign
    and convexity conditions. Actions with H(x, 0) = 0 carry their natural drift.
    """
    drift = natural_drift(h) if h.zero_at_origin else None
    return LocalAction(ActionVariant.HAMILTONIAN, h.dim, h, drift=drift,
                       params={'hamiltonian': h.to_dict()}, seed=seed)


def eval_local_action(a: LocalAction, x, y) -> float:
    """l(x, y) of any variant; l(x, 0) = 0"""
    return a(x, y)


def hamiltonian_local_action(h: Hamiltonian, x, y, seed: Optional[int] = None) -> float:
    """<y, theta_hat(x, y)>, with 0 for y = 0 and at critical points"""
    sol = solve_theta_batch(h, x, y, seed=seed)
    return float(np.dot(np.asarray(y, dtype=float).reshape(-1), sol.theta[0]))


def h0_plus(a: LocalAction) -> bool:
    """True for Hamiltonian actions with H(x, 0) = 0 (SDE and jump-process actions)"""
    return a.hamiltonian.zero_at_origin


def local_drift_near_root(center, radius: float, rate: float = 1.0) -> FlowField:
    """
    Cut-off drift rate * zeta(|x - c|) (x - c), a repellor at c.

    zeta is 1 on the ball of radius radius/2, 0 outside radius and a C^1
    smoothstep in between.
    """
    c = np.asarray(center, dtype=float).reshape(-1)
    if radius <= 0.0:
        raise ConfigError(f"Cut-off radius must be positive, got {radius}")
    half = 0.5 * radius

    def drift(X):
        D = np.asarray(X, dtype=float).reshape(-1, c.size) - c
        s = np.clip((np.linalg.norm(D, axis=1) - half) / half, 0.0, 1.0)
        zeta = 1.0 - s * s * (3.0 - 2.0 * s)
        return rate * zeta[:, None] * D

    return FlowField(c.size, drift, None, name='local_repellor',
                     params={'center': c.tolist(), 'radius': radius, 'rate': rate})


@dataclass
class LocalActionCheck:
    """Worst sampled margins of the local-action axioms"""
    homogeneity_error: float
    convexity_violation: float
    min_value: float
    samples: int

    @property
    def passed(self) -> bool:
        return self.homogeneity_error < 1e-10 and self.convexity_violation <= 1e-10 \
            and self.min_value >= -1e-12

    def to_dict(self) -> dict:
        return {'homogeneity_error': self.homogeneity_error,
                'convexity_violation': self.convexity_violation,
                'min_value': self.min_value, 'samples': self.samples, 'passed': self.passed}


def check_local_action(a: LocalAction, K: Box, samples: int = 1000,
                       seed: Optional[int] = None) -> LocalActionCheck:
    """
    Sample homogeneity, midpoint convexity and nonnegativity over K x R^n.

    Homogeneity errors are relative to c |y|.
    """
    if samples < 1:
        raise ConfigError(f"Sample count must be positive, got {samples}")
    rng = make_rng(seed)
    X = K.sample(rng, samples)
    Y1 = rng.standard_normal((samples, a.dim))
    Y2 = rng.standard_normal((samples, a.dim))
    c = rng.uniform(0.0, 5.0, samples)
    l1 = a.evaluate_batch(X, Y1)
    l2 = a.evaluate_batch(X, Y2)
    lc = a.evaluate_batch(X, c[:, None] * Y1)
    lm = a.evaluate_batch(X, 0.5 * (Y1 + Y2))
    scale = np.maximum(c * np.linalg.norm(Y1, axis=1), 1e-300)
    report = LocalActionCheck(
        homogeneity_error=float(np.max(np.abs(lc - c * l1) / np.maximum(scale, 1.0))),
        convexity_violation=float(np.max(lm - 0.5 * (l1 + l2))),
        min_value=float(min(np.min(l1), np.min(l2))),
        samples=samples,
    )
    logger.debug("check_local_action(%s): %s", a.name, report.to_dict())
    return report
