"""
sets.py

Endpoint sets A1, A2 of a minimization problem.

Three kinds are supported: a single point, a closed ball (scenario kind
`sphere`; its boundary is the sphere) and the zero set of a level function.
Projection is exact for points and balls and uses bisection along the
gradient line through the point for level sets.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np
from scipy.optimize import brentq

from src.qpcore import ConfigError, EmptyManifoldError, as_point, unit_directions
from src.qpmanifolds import AdmissibleManifold, zero_set_points

logger = logging.getLogger(__name__)

SET_TOL = 1e-8
BRACKET_GROWTH = 2.0
BRACKET_STEPS = 60
DISJOINT_SAMPLES = 64


class SetKind(str, Enum):
    """Shape of an endpoint set"""
    POINT = 'point'
    SPHERE = 'sphere'
    LEVEL_SET = 'level_set'


@dataclass(frozen=True)
class EndpointSet:
    """
    A start or end set

    Attributes:
        kind: point / sphere (closed ball) / level_set (zero set of f_M)
        center: The point, or the ball centre; None for level sets
        radius: Ball radius (0 for points)
        manifold: Level function for level sets
    """
    kind: SetKind
    center: Optional[tuple] = None
    radius: float = 0.0
    manifold: Optional[AdmissibleManifold] = None

    @classmethod
    def point(cls, x) -> 'EndpointSet':
        return cls(SetKind.POINT, tuple(float(v) for v in as_point(x)))

    @classmethod
    def sphere(cls, center, radius: float) -> 'EndpointSet':
        if radius <= 0.0:
            raise ConfigError(f"Sphere radius must be positive, got {radius}")
        return cls(SetKind.SPHERE, tuple(float(v) for v in as_point(center)), float(radius))

    @classmethod
    def level_set(cls, m: AdmissibleManifold) -> 'EndpointSet':
        return cls(SetKind.LEVEL_SET, manifold=m)

    @property
    def dim(self) -> int:
        return self.manifold.dim if self.kind == SetKind.LEVEL_SET else len(self.center)

    @property
    def anchor(self) -> Optional[np.ndarray]:
        return None if self.center is None else np.asarray(self.center, dtype=float)

    def contains(self, x, tol: float = SET_TOL) -> bool:
        x = np.asarray(x, dtype=float)
        if self.kind == SetKind.POINT:
            return bool(np.linalg.norm(x - self.anchor) <= tol)
        if self.kind == SetKind.SPHERE:
            return bool(np.linalg.norm(x - self.anchor) <= self.radius + tol)
        return abs(self.manifold.value(x)) <= tol

    def project(self, x) -> np.ndarray:
        """Nearest point of the set (level sets: root along the gradient line through x)"""
        x = as_point(x, self.dim)
        if self.kind == SetKind.POINT:
            return self.anchor.copy()
        if self.kind == SetKind.SPHERE:
            d = x - self.anchor
            r = float(np.linalg.norm(d))
            if r <= self.radius:
                return x
            return self.anchor + self.radius * d / r
        return _project_level(self.manifold, x)

    def representative(self, toward=None) -> np.ndarray:
        """
        A point of the set: the point itself, the ball point nearest to
        `toward` (the centre without it), or the projection of `toward`
        (a zero-set sample without it) for level sets.
        """
        if self.kind == SetKind.POINT:
            return self.anchor.copy()
        if toward is not None:
            return self.project(toward)
        if self.kind == SetKind.SPHERE:
            return self.anchor.copy()
        return zero_set_points(self.manifold, samples=16, seed=0)[0]

    def to_dict(self) -> Dict[str, Any]:
        d: Dict[str, Any] = {'kind': self.kind.value}
        if self.center is not None:
            d['center'] = list(self.center)
        if self.kind == SetKind.SPHERE:
            d['radius'] = self.radius
        if self.manifold is not None:
            d['manifold'] = self.manifold.to_dict()
        return d


def _project_level(m: AdmissibleManifold, x: np.ndarray) -> np.ndarray:
    v0 = m.value(x)
    if abs(v0) <= SET_TOL:
        return x
    g = m.gradient(x)
    gn = float(np.linalg.norm(g))
    if gn == 0.0:
        raise EmptyManifoldError(f"grad f_M vanishes at {x.tolist()}; cannot project")
    # step against the sign of f_M until the value changes sign
    d = -np.sign(v0) * g / gn
    step = abs(v0) / gn
    lo = 0.0
    for _ in range(BRACKET_STEPS):
        hi = lo + step
        if np.sign(m.value(x + hi * d)) != np.sign(v0):
            s = brentq(lambda u: m.value(x + u * d), lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
            return x + s * d
        lo, step = hi, step * BRACKET_GROWTH
    raise EmptyManifoldError(f"No zero of f_M along the gradient line through {x.tolist()}")


def _samples(s: EndpointSet) -> np.ndarray:
    if s.kind == SetKind.POINT:
        return s.anchor[None, :]
    if s.kind == SetKind.SPHERE:
        ring = s.anchor + s.radius * unit_directions(s.dim, DISJOINT_SAMPLES)
        return np.vstack([s.anchor[None, :], ring])
    return zero_set_points(s.manifold, samples=DISJOINT_SAMPLES, seed=0)


def sets_disjoint(a: EndpointSet, b: EndpointSet) -> bool:
    """
    Disjointness of two endpoint sets.

    Exact for points and balls; a level set is compared through samples of
    the other set, which must all lie strictly on one side of it.
    """
    if a.kind != SetKind.LEVEL_SET and b.kind != SetKind.LEVEL_SET:
        return float(np.linalg.norm(a.anchor - b.anchor)) > a.radius + b.radius + SET_TOL
    level, other = (a, b) if a.kind == SetKind.LEVEL_SET else (b, a)
    vals = level.manifold.values(_samples(other))
    return bool(np.all(vals > SET_TOL) or np.all(vals < -SET_TOL))
