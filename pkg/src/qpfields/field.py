"""
field.py

Drift vector fields b: D -> R^n.

Drifts are evaluated in batches: `drift` maps an (N, n) array of points to
an (N, n) array of vectors, so curve quadratures and sampling sweeps make a
single call. Point-wise helpers (`b`, `jacobian`, `speed`) wrap the batch
form for the ODE integrator and the Newton solvers.
"""

from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, Optional

import numpy as np

from src.qpcore import ConfigError, numerical_jacobian

BatchMap = Callable[[np.ndarray], np.ndarray]

JACOBIAN_STEP = 1e-6


def pointwise(fn: Callable[[np.ndarray], Any]) -> BatchMap:
    """Lift a single-point function to the batch signature"""
    def batch(X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(X)
        return np.array([np.asarray(fn(x), dtype=float) for x in X])
    return batch


@dataclass(frozen=True)
class FlowField:
    """
    Drift vector field with optional analytic Jacobian and potential

    Attributes:
        dim: State dimension n
        drift: Batched drift, (N, n) -> (N, n)
        jacobian_fn: Analytic Jacobian x -> (n, n); central differences when None
        name: Registry name (or 'custom')
        params: Parameters used to build the field (for reports)
        potential: Batched potential V, (N, n) -> (N,), when b = -grad V
        h_jac: Finite-difference step for the Jacobian
    """
    dim: int
    drift: BatchMap
    jacobian_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    name: str = 'custom'
    params: Dict[str, Any] = field(default_factory=dict)
    potential: Optional[BatchMap] = None
    h_jac: float = JACOBIAN_STEP

    def __post_init__(self):
        if self.dim < 1:
            raise ConfigError(f"Field dimension must be >= 1, got {self.dim}")

    def b(self, x) -> np.ndarray:
        """Drift at one point"""
        x = np.asarray(x, dtype=float).reshape(1, self.dim)
        return np.asarray(self.drift(x), dtype=float).reshape(self.dim)

    def b_batch(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float).reshape(-1, self.dim)
        return np.asarray(self.drift(X), dtype=float).reshape(X.shape)

    def speed(self, x) -> float:
        return float(np.linalg.norm(self.b(x)))

    def jacobian(self, x) -> np.ndarray:
        """grad b at x, shape (n, n)"""
        x = np.asarray(x, dtype=float).reshape(self.dim)
        if self.jacobian_fn is not None:
            return np.asarray(self.jacobian_fn(x), dtype=float).reshape(self.dim, self.dim)
        return numerical_jacobian(self.b, x, self.h_jac).reshape(self.dim, self.dim)

    def V(self, X) -> np.ndarray:
        """Potential values; ConfigError when the field has none"""
        if self.potential is None:
            raise ConfigError(f"Field '{self.name}' has no potential")
        X = np.asarray(X, dtype=float).reshape(-1, self.dim)
        return np.asarray(self.potential(X), dtype=float).reshape(-1)

    def reversed(self) -> 'FlowField':
        """Field -b (time reversal)"""
        drift, jac, pot = self.drift, self.jacobian_fn, self.potential
        return replace(
            self,
            drift=lambda X: -drift(X),
            jacobian_fn=None if jac is None else (lambda x: -jac(x)),
            potential=None if pot is None else (lambda X: -pot(X)),
            name=f"reversed({self.name})",
        )

    def scaled(self, beta: Callable[[np.ndarray], float]) -> 'FlowField':
        """Field beta(x) * b(x) for a scalar function beta"""
        drift = self.drift

        def scaled_drift(X):
            X = np.atleast_2d(X)
            weights = np.array([float(beta(x)) for x in X])
            return weights[:, None] * drift(X)

        return replace(self, drift=scaled_drift, jacobian_fn=None, potential=None,
                       name=f"scaled({self.name})")

    def to_dict(self) -> Dict[str, Any]:
        return {'name': self.name, 'dim': self.dim, 'params': dict(self.params)}


def jacobian_consistency(f: FlowField, points, h: float = JACOBIAN_STEP) -> float:
    """
    Largest deviation between the analytic and finite-difference Jacobians.

    Returns 0.0 for fields without an analytic Jacobian.
    """
    if f.jacobian_fn is None:
        return 0.0
    worst = 0.0
    for x in np.atleast_2d(points):
        numeric = numerical_jacobian(f.b, x, h)
        worst = max(worst, float(np.max(np.abs(numeric - f.jacobian(x)))))
    return worst
