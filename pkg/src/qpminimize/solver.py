"""
solver.py

Discrete minimization of the geometric action.

Each iteration takes a central-difference gradient of S with respect to
the nodes, removes its tangential part at interior nodes, and runs a
backtracking line search that halves the step from step0 until S
decreases. Every trial is clamped to the box, its endpoints are projected
onto their sets and its nodes are redistributed by arclength before S is
evaluated, so accepted iterates are admissible and the action history is
strictly decreasing.

The run stops when the relative decrease over the last STALL_WINDOW steps
falls below tol_S (converged), when no step size decreases S (stationary,
also converged), or at max_iters.
"""

import logging
from typing import List, Optional, Tuple

import numpy as np

from src.qpactions import LocalAction
from src.qpcore import (
    ActionEvaluationError,
    DomainError,
    MetricError,
    SolverFailureError,
    pairwise_sum,
    parallel_map,
)
from src.qpcurves import ArcCurve, Curve, reparameterize_arclength
from src.qpfields import FlowField

from .hitting import winding_number
from .problem import STALL_WINDOW, MinimizeProblem, MinimizeResult
from .seed import seed_curve
from .sets import SetKind

logger = logging.getLogger(__name__)

GRADIENT_STEP = 1e-6
# winding growth (in turns) that flags a wandering run
WINDING_GROWTH = 0.5

_EVALUATION_ERRORS = (MetricError, DomainError, SolverFailureError, FloatingPointError)


def _chord_values(a: LocalAction, X: np.ndarray) -> np.ndarray:
    return a.evaluate_batch(0.5 * (X[1:] + X[:-1]), np.diff(X, axis=0))


def _evaluate(a: LocalAction, X: np.ndarray, iteration: int) -> float:
    try:
        value = pairwise_sum(_chord_values(a, X))
    except _EVALUATION_ERRORS as exc:
        raise ActionEvaluationError(str(exc), iteration, cause=exc) from exc
    if not np.isfinite(value):
        raise ActionEvaluationError(f"non-finite action {value}", iteration)
    return value


def discrete_gradient(a: LocalAction, nodes, h: float, threads: Optional[int] = None) -> np.ndarray:
    """
    Central-difference gradient of the chord sum with respect to every node.

    Every chord joins an even and an odd node, so shifting all nodes of one
    parity along one axis changes each chord through exactly one node.
    The gradient therefore costs 4 n batched evaluations, whatever the
    node count. The evaluations are independent and run through
    parallel_map.

    Returns:
        (m, n) array, same shape as nodes
    """
    X = np.asarray(nodes, dtype=float)
    m, n = X.shape
    tasks = [(parity, k, sign) for parity in (0, 1) for k in range(n) for sign in (1.0, -1.0)]

    def node_sums(task: Tuple[int, int, float]) -> np.ndarray:
        parity, k, sign = task
        Y = X.copy()
        Y[parity::2, k] += sign * h
        vals = _chord_values(a, Y)
        return np.concatenate([[0.0], vals]) + np.concatenate([vals, [0.0]])

    sums = parallel_map(node_sums, tasks, threads)
    grad = np.zeros_like(X)
    for i, (parity, k, sign) in enumerate(tasks):
        if sign > 0:
            grad[parity::2, k] = (sums[i][parity::2] - sums[i + 1][parity::2]) / (2.0 * h)
    return grad


def _normal_part(grad: np.ndarray, X: np.ndarray) -> np.ndarray:
    out = grad.copy()
    t = X[2:] - X[:-2]
    norms = np.linalg.norm(t, axis=1, keepdims=True)
    t = np.divide(t, norms, out=np.zeros_like(t), where=norms > 0)
    out[1:-1] -= np.sum(out[1:-1] * t, axis=1, keepdims=True) * t
    return out


def _fix_endpoints(p: MinimizeProblem, grad: np.ndarray) -> np.ndarray:
    if p.start_set.kind == SetKind.POINT:
        grad[0] = 0.0
    if p.end_set.kind == SetKind.POINT:
        grad[-1] = 0.0
    return grad


def _admissible(p: MinimizeProblem, X: np.ndarray) -> Tuple[ArcCurve, np.ndarray, bool]:
    """Clamp, project endpoints, redistribute; returns (curve, pre-redistribution nodes, clamped)"""
    clamped = False
    if p.box is not None:
        Y = p.box.clip(X)
        clamped = bool(np.any(Y != X))
        X = Y
    X = X.copy()
    X[0] = p.start_set.project(X[0])
    X[-1] = p.end_set.project(X[-1])
    return reparameterize_arclength(Curve(X), p.nodes), X, clamped


def _winding(p: MinimizeProblem, c: Curve) -> Optional[float]:
    if p.winding_center is None:
        return None
    return abs(winding_number(c, p.winding_center))


def minimize(p: MinimizeProblem, initial: Optional[Curve] = None, f: Optional[FlowField] = None,
             threads: Optional[int] = None) -> MinimizeResult:
    """
    Relax a curve from start_set to end_set to a local minimizer of S.

    Args:
        p: Problem
        initial: Starting curve (default: seed_curve with the action's drift)
        f: Field used for the seed (default: the action's drift)
        threads: Workers for the gradient evaluations (default QUASIPATH_THREADS)

    Returns:
        MinimizeResult with a nonincreasing action history

    Raises:
        ActionEvaluationError: The local action failed; carries the iteration index
    """
    a = p.action
    field = f if f is not None else a.drift
    start = seed_curve(p, field) if initial is None else initial
    curve, raw, clamped = _admissible(p, np.asarray(start.nodes, dtype=float))
    S = _evaluate(a, curve.nodes, 0)
    history: List[float] = [S]
    windings: List[float] = []
    w = _winding(p, curve)
    if w is not None:
        windings.append(w)
    h = GRADIENT_STEP * p.scale
    clamp_count = int(clamped)
    if clamped:
        logger.warning("minimize: seed clamped to the box; consider enlarging it")
    stop_reason = 'max_iters'
    iterations = 0
    logger.debug("minimize: seed action %.12g, %d nodes", S, p.nodes)

    for it in range(1, p.max_iters + 1):
        try:
            grad = discrete_gradient(a, curve.nodes, h, threads)
        except _EVALUATION_ERRORS as exc:
            raise ActionEvaluationError(str(exc), it, cause=exc) from exc
        grad = _fix_endpoints(p, _normal_part(grad, curve.nodes))
        if not np.any(grad):
            stop_reason = 'stationary'
            break
        step = p.step0
        accepted = None
        for _ in range(p.max_halvings):
            trial, trial_raw, trial_clamped = _admissible(p, curve.nodes - step * grad)
            S_trial = _evaluate(a, trial.nodes, it)
            if S_trial < S:
                accepted = (trial, trial_raw, trial_clamped, S_trial)
                break
            step *= 0.5
        if accepted is None:
            stop_reason = 'stationary'
            break
        curve, raw, clamped, S = accepted
        iterations = it
        history.append(S)
        if clamped:
            if clamp_count == 0:
                logger.warning("minimize: box clamping active at iteration %d; consider enlarging the box", it)
            clamp_count += 1
        w = _winding(p, curve)
        if w is not None:
            windings.append(w)
        logger.debug("minimize: iteration %d, S = %.12g, step %.3g", it, S, step)
        if len(history) > STALL_WINDOW:
            ref = history[-1 - STALL_WINDOW]
            if (ref - S) <= p.tol_S * max(abs(ref), np.finfo(float).tiny):
                stop_reason = 'stalled'
                break

    converged = stop_reason in ('stalled', 'stationary')
    suspected = (not converged and len(windings) > 1
                 and windings[-1] - windings[0] >= WINDING_GROWTH)
    if suspected:
        logger.warning("minimize: no convergence and winding grew to %.3g turns; non-existence suspected",
                       windings[-1])
    logger.info("minimize: S = %.12g after %d iterations (%s)", S, iterations, stop_reason)
    params = p.to_dict()
    params['h_grad'] = h
    return MinimizeResult(
        curve=curve, action_value=S, converged=converged, iterations=iterations,
        action_history=history, seed_action=history[0], stop_reason=stop_reason,
        clamp_active=clamped, clamp_count=clamp_count, raw_curve=Curve(raw, degenerate=True),
        winding_history=windings, nonexistence_suspected=suspected, parameters=params,
    )
