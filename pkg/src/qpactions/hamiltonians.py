"""
hamiltonians.py

Hamiltonians H(x, theta) convex in theta, evaluated in batches.

Every evaluator takes X and TH of shape (N, n): H returns (N,), H_theta
(N, n) and H_thetatheta (N, n, n). Constructors cover the SDE, Markov-jump
(with the birth-death special case), Riemannian and Agmon families.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import numpy as np

from src.qpcore import Box, ConfigError, DomainError, GridSpec, MetricError, make_rng, numerical_jacobian
from src.qpfields import FlowField

logger = logging.getLogger(__name__)

TOL_CRIT = 1e-9
RATE_FLOOR = -1e-12

MatrixSpec = Union[None, Sequence[Sequence[float]], Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class Hamiltonian:
    """
    Batched Hamiltonian and its theta-derivatives

    Attributes:
        dim: State dimension n
        H: (X, TH) -> (N,)
        H_theta: (X, TH) -> (N, n)
        H_thetatheta: (X, TH) -> (N, n, n)
        H_x: Optional (X, TH) -> (N, n)
        name: Family name
        params: Construction parameters (for reports)
        zero_at_origin: H(x, 0) == 0 for every x
    """
    dim: int
    H: Callable[[np.ndarray, np.ndarray], np.ndarray]
    H_theta: Callable[[np.ndarray, np.ndarray], np.ndarray]
    H_thetatheta: Callable[[np.ndarray, np.ndarray], np.ndarray]
    H_x: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
    name: str = 'custom'
    params: Dict[str, Any] = field(default_factory=dict)
    zero_at_origin: bool = False

    def _rows(self, x, theta):
        X = np.asarray(x, dtype=float).reshape(-1, self.dim)
        TH = np.asarray(theta, dtype=float).reshape(-1, self.dim)
        return X, TH

    def value(self, x, theta) -> float:
        X, TH = self._rows(x, theta)
        return float(self.H(X, TH)[0])

    def gradient(self, x, theta) -> np.ndarray:
        X, TH = self._rows(x, theta)
        return np.asarray(self.H_theta(X, TH))[0]

    def hessian(self, x, theta) -> np.ndarray:
        X, TH = self._rows(x, theta)
        return np.asarray(self.H_thetatheta(X, TH))[0]

    def at_origin(self, X):
        """H, H_theta and H_thetatheta at theta = 0 for a batch of points"""
        X = np.asarray(X, dtype=float).reshape(-1, self.dim)
        Z = np.zeros_like(X)
        return self.H(X, Z), self.H_theta(X, Z), self.H_thetatheta(X, Z)

    def to_dict(self) -> Dict[str, Any]:
        return {'name': self.name, 'dim': self.dim, 'params': dict(self.params),
                'zero_at_origin': self.zero_at_origin}


def matrix_field(A: MatrixSpec, dim: int) -> Callable[[np.ndarray], np.ndarray]:
    """
    Batched matrix field from a constant matrix, a point function or None (identity).

    The result maps (N, n) points to (N, n, n) matrices.
    """
    if A is None:
        eye = np.eye(dim)
        return lambda X: np.broadcast_to(eye, (X.shape[0], dim, dim)).copy()
    if callable(A):
        return lambda X: np.array([np.asarray(A(x), dtype=float).reshape(dim, dim) for x in X])
    M = np.asarray(A, dtype=float)
    if M.shape != (dim, dim):
        raise ConfigError(f"Matrix has shape {M.shape}, expected {(dim, dim)}")
    check_spd(M[None])
    return lambda X: np.broadcast_to(M, (X.shape[0], dim, dim)).copy()


def check_spd(mats: np.ndarray, sym_tol: float = 1e-10) -> None:
    """
    Raise MetricError unless every matrix in the stack is symmetric positive definite.
    """
    mats = np.asarray(mats, dtype=float)
    asym = np.max(np.abs(mats - np.swapaxes(mats, -1, -2))) if mats.size else 0.0
    if asym > sym_tol * max(1.0, float(np.max(np.abs(mats)))):
        raise MetricError(f"Matrix field is not symmetric (asymmetry {asym:.3e})")
    try:
        np.linalg.cholesky(mats)
    except np.linalg.LinAlgError as exc:
        raise MetricError("Matrix field is not positive definite") from exc


def sde_hamiltonian(drift: FlowField, A: MatrixSpec = None) -> Hamiltonian:
    """
    H(x, theta) = <b(x), theta> + 1/2 theta^T A(x) theta.

    Args:
        drift: Drift field b
        A: Diffusion matrix (constant, point function, or None for identity)
    """
    n = drift.dim
    Af = matrix_field(A, n)

    def H(X, TH):
        return np.sum(drift.b_batch(X) * TH, axis=1) + 0.5 * np.einsum('ni,nij,nj->n', TH, Af(X), TH)

    def H_theta(X, TH):
        return drift.b_batch(X) + np.einsum('nij,nj->ni', Af(X), TH)

    def H_thetatheta(X, TH):
        return Af(X)

    return Hamiltonian(n, H, H_theta, H_thetatheta, name='sde',
                       params={'field': drift.to_dict(), 'A': _describe(A)}, zero_at_origin=True)


def _describe(A: MatrixSpec):
    if A is None:
        return 'identity'
    if callable(A):
        return 'function'
    return np.asarray(A, dtype=float).tolist()


# Rate functions for jump processes: name -> constructor(params) -> batched (N, n) -> (N,)
def _rate_constant(value: float = 1.0):
    return lambda X: np.full(X.shape[0], float(value))


def _rate_linear(coeff: float = 1.0, index: int = 0):
    return lambda X: float(coeff) * X[:, int(index)]


def _rate_affine(offset: float = 0.0, coeffs: Sequence[float] = (1.0,)):
    c = np.asarray(coeffs, dtype=float)
    return lambda X: float(offset) + X @ c


def _rate_quadratic(coeff: float = 1.0, index: int = 0):
    return lambda X: float(coeff) * X[:, int(index)] ** 2


RATE_FUNCTIONS: Dict[str, Callable[..., Callable[[np.ndarray], np.ndarray]]] = {
    'constant': _rate_constant,
    'linear': _rate_linear,
    'affine': _rate_affine,
    'quadratic': _rate_quadratic,
}


def rate_function(name: str, params: Optional[Dict[str, Any]] = None):
    """Look up and build a rate function from the built-in table"""
    if name not in RATE_FUNCTIONS:
        raise ConfigError(f"Unknown rate function '{name}'; available: {', '.join(sorted(RATE_FUNCTIONS))}")
    try:
        return RATE_FUNCTIONS[name](**(params or {}))
    except TypeError as exc:
        raise ConfigError(f"Bad parameters for rate '{name}': {exc}") from exc


def markov_jump_hamiltonian(rates: List[Callable[[np.ndarray], np.ndarray]],
                            jumps: Sequence[Sequence[float]],
                            params: Optional[Dict[str, Any]] = None) -> Hamiltonian:
    """
    H(x, theta) = sum_i nu_i(x) (exp(<e_i, theta>) - 1) for jump vectors e_i.

    Rates must be nonnegative where evaluated; negative rates raise DomainError.
    """
    E = np.asarray(jumps, dtype=float)
    if E.ndim != 2 or len(rates) != E.shape[0] or E.shape[0] == 0:
        raise ConfigError(f"Need one jump vector per rate, got {len(rates)} rates and jumps of shape {E.shape}")
    n = E.shape[1]

    def nu(X):
        R = np.stack([r(X) for r in rates], axis=1)
        if np.any(R < RATE_FLOOR):
            raise DomainError(f"Negative jump rate {float(np.min(R)):.3e}")
        return np.maximum(R, 0.0)

    def H(X, TH):
        with np.errstate(over='ignore'):
            return np.sum(nu(X) * np.expm1(TH @ E.T), axis=1)

    def H_theta(X, TH):
        with np.errstate(over='ignore'):
            return (nu(X) * np.exp(TH @ E.T)) @ E

    def H_thetatheta(X, TH):
        with np.errstate(over='ignore'):
            w = nu(X) * np.exp(TH @ E.T)
        return np.einsum('nk,ki,kj->nij', w, E, E)

    return Hamiltonian(n, H, H_theta, H_thetatheta, name='markov_jump',
                       params=params or {'jumps': E.tolist()}, zero_at_origin=True)


def birth_death_hamiltonian(birth: float = 1.0, death: float = 1.0) -> Hamiltonian:
    """H(x, theta) = birth (e^theta - 1) + death x (e^-theta - 1) on x > 0"""
    h = markov_jump_hamiltonian([_rate_constant(birth), _rate_linear(death, 0)], [[1.0], [-1.0]],
                                params={'birth': birth, 'death': death})
    return Hamiltonian(h.dim, h.H, h.H_theta, h.H_thetatheta, name='birth_death',
                       params=h.params, zero_at_origin=True)


def riemannian_hamiltonian(A: MatrixSpec = None, dim: int = 2) -> Hamiltonian:
    """
    H(x, theta) = theta^T A(x)^{-1} theta - 1, whose action is |y|_A = sqrt(y^T A y).
    """
    n = len(A) if (A is not None and not callable(A)) else dim
    Af = matrix_field(A, n)

    def H(X, TH):
        return np.einsum('ni,ni->n', TH, np.linalg.solve(Af(X), TH[..., None])[..., 0]) - 1.0

    def H_theta(X, TH):
        return 2.0 * np.linalg.solve(Af(X), TH[..., None])[..., 0]

    def H_thetatheta(X, TH):
        return 2.0 * np.linalg.inv(Af(X))

    return Hamiltonian(n, H, H_theta, H_thetatheta, name='riemannian',
                       params={'A': _describe(A)}, zero_at_origin=False)


def agmon_hamiltonian(U: Callable[[np.ndarray], np.ndarray], dim: int) -> Hamiltonian:
    """H(x, theta) = |theta|^2 / 2 - U(x) for a batched potential U >= 0"""
    def H(X, TH):
        return 0.5 * np.sum(TH * TH, axis=1) - U(X)

    def H_theta(X, TH):
        return TH.copy()

    def H_thetatheta(X, TH):
        return np.broadcast_to(np.eye(dim), (X.shape[0], dim, dim)).copy()

    return Hamiltonian(dim, H, H_theta, H_thetatheta, name='agmon', zero_at_origin=False)


def natural_drift(h: Hamiltonian) -> FlowField:
    """The drift b(x) = H_theta(x, 0); Jacobian by central differences"""
    def drift(X):
        X = np.asarray(X, dtype=float).reshape(-1, h.dim)
        return h.H_theta(X, np.zeros_like(X))

    return FlowField(h.dim, drift, None, name=f"natural({h.name})", params=h.to_dict())


def critical_margin(h: Hamiltonian, x) -> float:
    """max(|H(x, 0)|, |H_theta(x, 0)|); the point is critical when below TOL_CRIT"""
    H0, G0, _ = h.at_origin(x)
    return float(max(abs(H0[0]), np.linalg.norm(G0[0])))


def is_critical_point(h: Hamiltonian, x, tol: float = TOL_CRIT) -> bool:
    """True iff |H(x, 0)| < tol and |H_theta(x, 0)| < tol"""
    H0, G0, _ = h.at_origin(x)
    return bool(abs(H0[0]) < tol and np.linalg.norm(G0[0]) < tol)


def _theta_samples(rng: np.random.Generator, dim: int, radius: float, count: int) -> np.ndarray:
    axes = np.vstack([np.zeros((1, dim)), radius * np.eye(dim), -radius * np.eye(dim)])
    g = rng.standard_normal((count, dim))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    inner = g * (radius * rng.random(count) ** (1.0 / dim))[:, None]
    return np.vstack([axes, inner])


def _sample_points(K: Box, samples) -> np.ndarray:
    if isinstance(samples, GridSpec):
        pts = samples.points()
    else:
        if int(samples) < 1:
            raise ConfigError(f"Sample count must be positive, got {samples}")
        pts = K.sobol(int(samples), seed=0)
    if len(pts) == 0:
        raise ConfigError("Empty sample grid")
    return pts


def drift_constant(h: Hamiltonian, K: Box, samples=256, theta_samples: int = 16,
                   seed: Optional[int] = None) -> float:
    """
    Sampled drift constant 1 / (2 + sup |H_thetatheta|) over K x {|theta| <= a}.

    a is the sampled sup of |b| = |H_theta(x, 0)| over K and |.| the spectral
    norm. The result lies in (0, 1/2].

    Args:
        h: Hamiltonian with H(x, 0) = 0
        K: Compact box
        samples: GridSpec or number of Sobol points in K
        theta_samples: Random theta per point (besides 0 and the +-a axes)
        seed: RNG seed

    Raises:
        ConfigError: Empty sample set
    """
    X = _sample_points(K, samples)
    _, B, _ = h.at_origin(X)
    a = float(np.max(np.linalg.norm(B, axis=1)))
    rng = make_rng(seed)
    sup_hess = 0.0
    for x in X:
        TH = _theta_samples(rng, h.dim, a, theta_samples)
        Hs = h.H_thetatheta(np.broadcast_to(x, TH.shape).copy(), TH)
        sup_hess = max(sup_hess, float(np.max(np.linalg.norm(Hs, ord=2, axis=(1, 2)))))
    value = 1.0 / (2.0 + sup_hess)
    logger.debug("drift_constant: a=%.6g sup|H_tt|=%.6g -> %.6g", a, sup_hess, value)
    return value


@dataclass
class HamiltonianCheck:
    """
    Margins of the structural Hamiltonian checks

    Attributes:
        h1_max: Largest sampled H(x, 0) (must be <= tol)
        h1_strict: |H(x, 0)| <= tol at every sample
        m_K: Smallest sampled eigenvalue of H_thetatheta (must be > 0)
        gradient_error: Largest |H_theta - finite differences of H|
        hessian_error: Largest |H_thetatheta - finite differences of H_theta|
        tol: Tolerance used
    """
    h1_max: float
    h1_strict: bool
    m_K: float
    gradient_error: float
    hessian_error: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.h1_max <= self.tol and self.m_K > 0.0 and self.gradient_error < 1e-5 \
            and self.hessian_error < 1e-5

    def to_dict(self) -> dict:
        return {'h1_max': self.h1_max, 'h1_strict': self.h1_strict, 'm_K': self.m_K,
                'gradient_error': self.gradient_error, 'hessian_error': self.hessian_error,
                'tol': self.tol, 'passed': self.passed}


def check_hamiltonian(h: Hamiltonian, K: Box, samples: int = 64, theta_radius: float = 1.0,
                      tol: float = 1e-9, seed: Optional[int] = None) -> HamiltonianCheck:
    """
    Sample the sign condition H(x, 0) <= 0, strict convexity in theta and
    the consistency of H_theta / H_thetatheta with finite differences.
    """
    rng = make_rng(seed)
    X = _sample_points(K, samples)
    H0, _, _ = h.at_origin(X)
    TH = _theta_samples(rng, h.dim, theta_radius, max(len(X) - 2 * h.dim - 1, 1))[:len(X)]
    if len(TH) < len(X):
        TH = np.vstack([TH, np.zeros((len(X) - len(TH), h.dim))])
    Hs = h.H_thetatheta(X, TH)
    m_K = float(np.min(np.linalg.eigvalsh(0.5 * (Hs + np.swapaxes(Hs, 1, 2)))))
    grad_err = hess_err = 0.0
    for x, th in zip(X[:16], TH[:16]):
        num_g = numerical_jacobian(lambda t: np.array([h.value(x, t)]), th, 1e-5)[0]
        grad_err = max(grad_err, float(np.max(np.abs(num_g - h.gradient(x, th)))))
        num_h = numerical_jacobian(lambda t: h.gradient(x, t), th, 1e-5)
        hess_err = max(hess_err, float(np.max(np.abs(num_h - h.hessian(x, th)))))
    report = HamiltonianCheck(
        h1_max=float(np.max(H0)),
        h1_strict=bool(np.all(np.abs(H0) <= tol)),
        m_K=m_K,
        gradient_error=grad_err,
        hessian_error=hess_err,
        tol=tol,
    )
    if not report.passed:
        logger.warning("Hamiltonian '%s' failed structural checks: %s", h.name, report.to_dict())
    return report
