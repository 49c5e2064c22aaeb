"""
numerics.py

Small numerical kernels: finite differences, deterministic reductions,
seeded random generators and the data-parallel map used by sweeps.
"""

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

import numpy as np

from .errors import ConfigError

logger = logging.getLogger(__name__)

T = TypeVar('T')
R = TypeVar('R')

# Fixed 64-bit seed recorded in every report that draws random numbers
DEFAULT_SEED = 0x9E3779B97F4A7C15

THREADS_ENV = 'QUASIPATH_THREADS'


def make_rng(seed: Optional[int] = None) -> np.random.Generator:
    """Seeded generator; None selects DEFAULT_SEED"""
    return np.random.default_rng(DEFAULT_SEED if seed is None else int(seed))


def numerical_jacobian(fn: Callable[[np.ndarray], np.ndarray], x, h: float = 1e-6) -> np.ndarray:
    """
    Central-difference Jacobian of a vector map, error O(h^2).

    Args:
        fn: Map R^n -> R^m
        x: Evaluation point
        h: Step

    Returns:
        (m, n) matrix
    """
    x = np.asarray(x, dtype=float)
    cols = []
    for k in range(x.shape[0]):
        e = np.zeros_like(x)
        e[k] = h
        cols.append((np.atleast_1d(fn(x + e)) - np.atleast_1d(fn(x - e))) / (2.0 * h))
    return np.stack(cols, axis=-1)


def numerical_gradient(fn: Callable[[np.ndarray], float], x, h: float = 1e-6) -> np.ndarray:
    """Central-difference gradient of a scalar function"""
    x = np.asarray(x, dtype=float)
    grad = np.empty_like(x)
    for k in range(x.shape[0]):
        e = np.zeros_like(x)
        e[k] = h
        grad[k] = (float(fn(x + e)) - float(fn(x - e))) / (2.0 * h)
    return grad


def pairwise_sum(values) -> float:
    """
    Correctly rounded sum (math.fsum).

    The result does not depend on summation order, so reversed or permuted
    inputs give the same bits.
    """
    arr = np.ascontiguousarray(values, dtype=float).ravel()
    return math.fsum(arr.tolist())


def unit_directions(dim: int, count: int, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """
    Unit vectors covering the sphere.

    1-D gives {+1, -1}; 2-D gives `count` equally spaced angles; higher
    dimensions give the signed axes plus normalised Gaussian samples.
    """
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        angles = 2.0 * np.pi * np.arange(count) / count
        return np.stack([np.cos(angles), np.sin(angles)], axis=-1)
    axes = np.vstack([np.eye(dim), -np.eye(dim)])
    rng = rng or make_rng()
    extra = rng.standard_normal((max(count - 2 * dim, 0), dim))
    extra /= np.linalg.norm(extra, axis=1, keepdims=True)
    return np.vstack([axes, extra])


def thread_count() -> int:
    """Worker count for data-parallel sweeps (QUASIPATH_THREADS, default 1)"""
    raw = os.environ.get(THREADS_ENV, '1').strip() or '1'
    try:
        value = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ConfigError(f"{THREADS_ENV} must be >= 1, got {value}")
    return value


def parallel_map(fn: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None) -> List[R]:
    """
    Order-preserving map, threaded when more than one worker is configured.

    Results are collected in input order, so output never depends on
    scheduling.
    """
    items = list(items)
    workers = thread_count() if threads is None else threads
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    logger.debug("parallel_map: %d items on %d threads", len(items), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
