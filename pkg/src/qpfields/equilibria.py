"""
equilibria.py

Roots of the drift and their linear classification.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.qpcore import Box, ConfigError, GridSpec

from .field import FlowField

logger = logging.getLogger(__name__)

TOL_EQ = 1e-10
TOL_LAMBDA = 1e-8
NEWTON_MAX_ITER = 60


class EquilibriumKind(str, Enum):
    """Linear type of an equilibrium"""
    ATTRACTOR = "attractor"
    REPELLOR = "repellor"
    SADDLE = "saddle"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class Equilibrium:
    """
    Root of b with its Jacobian spectrum

    Attributes:
        location: Point with |b| < TOL_EQ
        eigenvalues: Eigenvalues of grad b at the location
        kind: Classification by the signs of the real parts
    """
    location: Tuple[float, ...]
    eigenvalues: Tuple[complex, ...]
    kind: EquilibriumKind

    @property
    def point(self) -> np.ndarray:
        return np.asarray(self.location, dtype=float)

    @property
    def dim(self) -> int:
        return len(self.location)

    def to_dict(self) -> dict:
        return {
            'location': list(self.location),
            'eigenvalues': [[float(np.real(v)), float(np.imag(v))] for v in self.eigenvalues],
            'kind': self.kind.value,
        }


def classify_eigenvalues(eigenvalues: Sequence[complex], tol: float = TOL_LAMBDA) -> EquilibriumKind:
    """
    Kind from real parts: all below -tol is an attractor, all above tol a
    repellor, mixed signs with none in [-tol, tol] a saddle.
    """
    re = np.real(np.asarray(eigenvalues, dtype=complex))
    if np.all(re < -tol):
        return EquilibriumKind.ATTRACTOR
    if np.all(re > tol):
        return EquilibriumKind.REPELLOR
    if np.all(np.abs(re) > tol):
        return EquilibriumKind.SADDLE
    return EquilibriumKind.DEGENERATE


def make_equilibrium(f: FlowField, x, tol: float = TOL_LAMBDA) -> Equilibrium:
    """Classify a known root of b"""
    x = np.asarray(x, dtype=float).reshape(f.dim)
    eig = np.linalg.eigvals(f.jacobian(x))
    order = np.lexsort((np.imag(eig), np.real(eig)))
    eig = tuple(complex(v) for v in eig[order])
    return Equilibrium(tuple(float(v) for v in x), eig, classify_eigenvalues(eig, tol))


def _newton(f: FlowField, x0: np.ndarray, tol_eq: float, max_iter: int) -> Optional[np.ndarray]:
    x = x0.copy()
    for _ in range(max_iter):
        bx = f.b(x)
        if not np.all(np.isfinite(bx)):
            return None
        if np.linalg.norm(bx) < tol_eq:
            return x
        J = f.jacobian(x)
        try:
            step = np.linalg.solve(J, bx)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(J, bx, rcond=None)[0]
        if not np.any(step):
            return None
        x = x - step
    return x if np.linalg.norm(f.b(x)) < tol_eq else None


def find_equilibria(f: FlowField, search_box: Box, seeds: Optional[GridSpec] = None,
                    tol_eq: float = TOL_EQ, tol_lambda: float = TOL_LAMBDA,
                    tol_dedup: Optional[float] = None) -> List[Equilibrium]:
    """
    Newton refinement of b = 0 from a seed grid.

    Args:
        f: Drift field
        search_box: Region searched; roots outside it are dropped
        seeds: Seed grid (default 11 points per axis over the box)
        tol_eq: Residual |b| accepted as a root
        tol_lambda: Eigenvalue threshold for the classification
        tol_dedup: Merge distance (default 1e-6 * box scale)

    Returns:
        Equilibria sorted by location; seeds that do not converge are skipped
    """
    if search_box.dim != f.dim:
        raise ConfigError(f"Search box dimension {search_box.dim} != field dimension {f.dim}")
    seeds = seeds or GridSpec(search_box, (11,) * f.dim)
    dedup = tol_dedup if tol_dedup is not None else 1e-6 * search_box.scale
    roots: List[np.ndarray] = []
    skipped = 0
    for x0 in seeds.points():
        root = _newton(f, x0, tol_eq, NEWTON_MAX_ITER)
        if root is None or not search_box.contains(root, tol=1e-9 * search_box.scale):
            skipped += 1
            continue
        if all(np.linalg.norm(root - r) > dedup for r in roots):
            roots.append(root)
    logger.debug("find_equilibria: %d roots, %d seeds skipped", len(roots), skipped)
    found = [make_equilibrium(f, r, tol_lambda) for r in roots]
    return sorted(found, key=lambda e: e.location)


def nearest_equilibrium(equilibria: Sequence[Equilibrium], x, kinds=None) -> Optional[Equilibrium]:
    """Closest equilibrium (optionally of the given kinds) to x"""
    x = np.asarray(x, dtype=float)
    pool = [e for e in equilibria if kinds is None or e.kind in kinds]
    if not pool:
        return None
    return min(pool, key=lambda e: float(np.linalg.norm(e.point - x)))
