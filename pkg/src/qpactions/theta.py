"""
theta.py

Root solver for the maximizing covector of a Hamiltonian action.

For y != 0 at a non-critical x the pair (theta_hat, lambda) solves

    H_theta(x, theta) = lambda * y,    H(x, theta) = 0,    lambda >= 0,

and the local action is <y, theta_hat>. The system is solved by damped
Newton on the (n+1)-dimensional residual, for a whole batch of (x, y)
rows at once, from the root of the quadratic model of H at theta = 0.
Rows that stall or converge to the lambda < 0 root restart from seeded
perturbations of that start.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.qpcore import DomainError, SolverFailureError, make_rng

from .hamiltonians import TOL_CRIT, Hamiltonian

logger = logging.getLogger(__name__)

TOL_ROOT = 1e-12
ACCEPT_TOL = 1e-9
MAX_ITER = 50
MAX_RESTARTS = 8
MAX_HALVINGS = 30


@dataclass(frozen=True)
class ThetaSolution:
    """
    Solution of the constrained root system at one (x, y)

    Attributes:
        theta_hat: Maximizing covector
        lam: Multiplier lambda >= 0 (0 at critical points and for y = 0)
        residual: max(|H|, |H_theta - lambda y| / (1 + |y|))
        iterations: Newton iterations of the accepted run
        restarts: Restarts used
    """
    theta_hat: np.ndarray
    lam: float
    residual: float
    iterations: int = 0
    restarts: int = 0

    def to_dict(self) -> dict:
        return {'theta_hat': [float(v) for v in self.theta_hat], 'lambda': self.lam,
                'residual': self.residual, 'iterations': self.iterations, 'restarts': self.restarts}


@dataclass
class ThetaBatch:
    """Row-wise solutions of solve_theta_batch"""
    theta: np.ndarray
    lam: np.ndarray
    residual: np.ndarray
    iterations: np.ndarray
    restarts: np.ndarray

    def __len__(self) -> int:
        return self.theta.shape[0]

    def row(self, i: int) -> ThetaSolution:
        return ThetaSolution(self.theta[i].copy(), float(self.lam[i]), float(self.residual[i]),
                             int(self.iterations[i]), int(self.restarts[i]))


def batched_solve(J: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """
    Solve J[k] s[k] = rhs[k] for a stack of systems.

    Singular systems fall back to least squares; rows with non-finite data
    get a zero step.
    """
    out = np.zeros_like(rhs)
    finite = np.all(np.isfinite(J), axis=(1, 2)) & np.all(np.isfinite(rhs), axis=1)
    if not finite.any():
        return out
    Jf, rf = J[finite], rhs[finite]
    try:
        out[finite] = np.linalg.solve(Jf, rf[..., None])[..., 0]
    except np.linalg.LinAlgError:
        out[finite] = np.array([np.linalg.lstsq(j, r, rcond=None)[0] for j, r in zip(Jf, rf)])
    return out


def _system(h: Hamiltonian, X, Y, TH, LAM):
    with np.errstate(over='ignore', invalid='ignore'):
        Hv = h.H(X, TH)
        G = h.H_theta(X, TH)
        R = G - LAM[:, None] * Y
        F = np.concatenate([R, Hv[:, None]], axis=1)
        res = np.maximum(np.abs(Hv), np.linalg.norm(R, axis=1) / (1.0 + np.linalg.norm(Y, axis=1)))
    res = np.where(np.isfinite(res), res, np.inf)
    return F, G, res


def _quadratic_start(h: Hamiltonian, X, Y):
    """
    Root of the quadratic model H0 + <b, t> + t^T M t / 2 of H around 0.

    Exact for quadratic Hamiltonians (SDE, Riemannian, Agmon).
    """
    H0, B, M = h.at_origin(X)
    try:
        Minv_y = np.linalg.solve(M, Y[..., None])[..., 0]
        Minv_b = np.linalg.solve(M, B[..., None])[..., 0]
    except np.linalg.LinAlgError:
        P = np.linalg.pinv(M)
        Minv_y = np.einsum('nij,nj->ni', P, Y)
        Minv_b = np.einsum('nij,nj->ni', P, B)
    num = np.sum(B * Minv_b, axis=1) - 2.0 * H0
    den = np.sum(Y * Minv_y, axis=1)
    lam0 = np.sqrt(np.maximum(num, 0.0) / np.maximum(den, 1e-300))
    return lam0[:, None] * Minv_y - Minv_b, lam0


def _newton(h: Hamiltonian, X, Y, TH, LAM, tol: float, max_iter: int):
    n = h.dim
    TH, LAM = TH.copy(), LAM.copy()
    F, G, res = _system(h, X, Y, TH, LAM)
    iters = np.zeros(len(X), dtype=int)
    stuck = np.zeros(len(X), dtype=bool)
    for it in range(max_iter):
        active = (res >= tol) & ~stuck
        if not active.any():
            break
        idx = np.flatnonzero(active)
        J = np.zeros((len(idx), n + 1, n + 1))
        with np.errstate(over='ignore', invalid='ignore'):
            J[:, :n, :n] = h.H_thetatheta(X[idx], TH[idx])
        J[:, :n, n] = -Y[idx]
        J[:, n, :n] = G[idx]
        step = batched_solve(J, -F[idx])
        merit = np.linalg.norm(F[idx], axis=1)
        alpha = np.ones(len(idx))
        pending = np.ones(len(idx), dtype=bool)
        for _ in range(MAX_HALVINGS):
            sub = np.flatnonzero(pending)
            rows = idx[sub]
            th_try = TH[rows] + alpha[sub, None] * step[sub, :n]
            lam_try = LAM[rows] + alpha[sub] * step[sub, n]
            F_try, G_try, res_try = _system(h, X[rows], Y[rows], th_try, lam_try)
            ok = np.linalg.norm(F_try, axis=1) < merit[sub]
            if ok.any():
                acc = rows[ok]
                TH[acc], LAM[acc] = th_try[ok], lam_try[ok]
                F[acc], G[acc], res[acc] = F_try[ok], G_try[ok], res_try[ok]
                iters[acc] = it + 1
                pending[sub[ok]] = False
            if not pending.any():
                break
            alpha[pending] *= 0.5
        stuck[idx[pending]] = True
    return TH, LAM, res, iters


def _reported_lambda(h: Hamiltonian, X, Y, TH) -> np.ndarray:
    G = h.H_theta(X, TH)
    return np.sum(G * Y, axis=1) / np.sum(Y * Y, axis=1)


def solve_theta_batch(h: Hamiltonian, X, Y, tol: float = TOL_ROOT, accept_tol: float = ACCEPT_TOL,
                      max_iter: int = MAX_ITER, restarts: int = MAX_RESTARTS,
                      tol_crit: float = TOL_CRIT, seed: Optional[int] = None) -> ThetaBatch:
    """
    Solve the constrained root system for every row of (X, Y).

    Rows with y = 0 or a critical x get theta_hat = 0 and lambda = 0.

    Args:
        h: Hamiltonian
        X: (N, n) points
        Y: (N, n) directions
        tol: Target residual
        accept_tol: Residual still accepted once max_iter is exhausted
        max_iter: Newton iterations per start
        restarts: Seeded restarts for failing rows
        tol_crit: Critical-point threshold
        seed: RNG seed for restarts

    Returns:
        ThetaBatch

    Raises:
        DomainError: H(x, 0) > 0 at some row
        SolverFailureError: Some row failed after all restarts
    """
    X = np.asarray(X, dtype=float).reshape(-1, h.dim)
    Y = np.asarray(Y, dtype=float).reshape(-1, h.dim)
    N = X.shape[0]
    out = ThetaBatch(np.zeros((N, h.dim)), np.zeros(N), np.zeros(N),
                     np.zeros(N, dtype=int), np.zeros(N, dtype=int))
    if N == 0:
        return out

    H0, B, _ = h.at_origin(X)
    if np.any(H0 > tol_crit):
        worst = int(np.argmax(H0))
        raise DomainError(f"H(x, 0) = {H0[worst]:.3e} > 0 at x = {X[worst].tolist()}")
    critical = (np.abs(H0) < tol_crit) & (np.linalg.norm(B, axis=1) < tol_crit)
    out.residual[critical] = np.maximum(np.abs(H0[critical]), np.linalg.norm(B[critical], axis=1))
    work = np.flatnonzero((np.linalg.norm(Y, axis=1) > 0.0) & ~critical)
    if work.size == 0:
        return out

    Xw, Yw = X[work], Y[work]
    TH0, LAM0 = _quadratic_start(h, Xw, Yw)
    TH, LAM, res, iters = _newton(h, Xw, Yw, TH0, LAM0, tol, max_iter)
    lam = _reported_lambda(h, Xw, Yw, TH)
    good = (res < accept_tol) & (lam >= -accept_tol)
    best = np.where(lam >= -accept_tol, res, np.inf)
    used = np.zeros(len(work), dtype=int)

    rng = make_rng(seed)
    for attempt in range(1, restarts + 1):
        fail = np.flatnonzero(~good)
        if fail.size == 0:
            break
        logger.info("solve_theta: restart %d for %d rows", attempt, fail.size)
        spread = 0.5 * attempt * (1.0 + np.linalg.norm(TH0[fail], axis=1, keepdims=True))
        th_start = TH0[fail] + spread * rng.standard_normal((fail.size, h.dim))
        lam_start = LAM0[fail] * rng.uniform(0.5, 1.5, fail.size) + 0.1 * rng.random(fail.size)
        th_r, lam_r, res_r, it_r = _newton(h, Xw[fail], Yw[fail], th_start, lam_start, tol, max_iter)
        lam_rep = _reported_lambda(h, Xw[fail], Yw[fail], th_r)
        ok = (res_r < accept_tol) & (lam_rep >= -accept_tol)
        best[fail] = np.minimum(best[fail], np.where(lam_rep >= -accept_tol, res_r, np.inf))
        rows = fail[ok]
        TH[rows], res[rows], iters[rows], lam[rows] = th_r[ok], res_r[ok], it_r[ok], lam_rep[ok]
        used[fail] = attempt
        good[rows] = True

    if not good.all():
        bad = np.flatnonzero(~good)
        raise SolverFailureError(
            f"theta solve failed at {bad.size} of {N} points (first x = {Xw[bad[0]].tolist()})",
            float(np.max(best[bad])),
        )

    out.theta[work] = TH
    out.lam[work] = np.maximum(lam, 0.0)
    out.residual[work] = res
    out.iterations[work] = iters
    out.restarts[work] = used
    return out


def solve_theta(h: Hamiltonian, x, y, seed: Optional[int] = None, **kwargs) -> ThetaSolution:
    """
    Maximizing covector and multiplier at a single (x, y).

    Raises:
        SolverFailureError: Newton failed from every start
    """
    return solve_theta_batch(h, x, y, seed=seed, **kwargs).row(0)


def legendre_lagrangian_batch(h: Hamiltonian, X, Y, tol: float = TOL_ROOT,
                              accept_tol: float = ACCEPT_TOL, max_iter: int = MAX_ITER) -> np.ndarray:
    """
    L(x, y) = sup_theta <y, theta> - H(x, theta) for every row.

    Newton on H_theta(x, theta) = y from the quadratic-model root
    M^{-1}(y - b), with halving line search on |H_theta - y|.

    Raises:
        SolverFailureError: Some row did not converge
    """
    X = np.asarray(X, dtype=float).reshape(-1, h.dim)
    Y = np.asarray(Y, dtype=float).reshape(-1, h.dim)
    _, B, M = h.at_origin(X)
    TH = batched_solve(M, Y - B)
    scale = 1.0 + np.linalg.norm(Y, axis=1)

    def residual(rows, th):
        with np.errstate(over='ignore', invalid='ignore'):
            R = h.H_theta(X[rows], th) - Y[rows]
            r = np.linalg.norm(R, axis=1)
        return R, np.where(np.isfinite(r), r, np.inf)

    all_rows = np.arange(len(X))
    R, res = residual(all_rows, TH)
    for _ in range(max_iter):
        active = np.flatnonzero(res / scale >= tol)
        if active.size == 0:
            break
        step = batched_solve(h.H_thetatheta(X[active], TH[active]), -R[active])
        alpha = np.ones(active.size)
        pending = np.ones(active.size, dtype=bool)
        for _ in range(MAX_HALVINGS):
            sub = np.flatnonzero(pending)
            rows = active[sub]
            th_try = TH[rows] + alpha[sub, None] * step[sub]
            R_try, r_try = residual(rows, th_try)
            ok = r_try < res[rows]
            TH[rows[ok]], R[rows[ok]], res[rows[ok]] = th_try[ok], R_try[ok], r_try[ok]
            pending[sub[ok]] = False
            if not pending.any():
                break
            alpha[pending] *= 0.5
        if pending.all():
            break

    rel = res / scale
    if np.any(rel >= accept_tol):
        raise SolverFailureError("Legendre transform did not converge", float(np.max(rel)))
    return np.sum(Y * TH, axis=1) - h.H(X, TH)


def legendre_lagrangian(h: Hamiltonian, x, y, **kwargs) -> float:
    """Legendre transform L(x, y) of H(x, .) at one point"""
    return float(legendre_lagrangian_batch(h, x, y, **kwargs)[0])
