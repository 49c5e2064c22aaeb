"""
primitives.py

Built-in manifolds: spheres, potential level sets, hyperplanes, polynomial
level sets and the small balls {f_s = a} around attractors (or {f_u = a}
around repellors).
"""

import logging
from typing import Any, Callable, Dict, List, Sequence

import numpy as np

from src.qpcore import Box, ConfigError, DivergenceError, NotInBasinError, as_point
from src.qpfields import Equilibrium, EquilibriumKind, FlowField, advance_arclength, equilibrium_distance

from .manifold import AdmissibleManifold, FlowLocator, Located

logger = logging.getLogger(__name__)

SPHERE_BOX_FACTOR = 1.5
BALL_BOX_FACTOR = 1.05
BALL_GRADIENT_STEP = 1e-5
BALL_LEVEL_TOL = 1e-10


def _box(box, dim: int) -> Box:
    if box is None:
        raise ConfigError("A bounding box is required for this manifold")
    if isinstance(box, Box):
        out = box
    else:
        out = Box.from_bounds(box[0], box[1])
    if out.dim != dim:
        raise ConfigError(f"Bounding box has dimension {out.dim}, expected {dim}")
    return out


def sphere(center: Sequence[float], radius: float, manifold_id: str = '') -> AdmissibleManifold:
    """f_M(x) = |x - c|^2 - r^2"""
    c = as_point(center)
    if radius <= 0.0:
        raise ConfigError(f"Sphere radius must be positive, got {radius}")
    r2 = float(radius) ** 2

    def level(X):
        return np.sum((X - c) ** 2, axis=1) - r2

    return AdmissibleManifold(
        dim=c.shape[0], level=level, bounding_box=Box.around(c, SPHERE_BOX_FACTOR * radius),
        gradient_fn=lambda x: 2.0 * (x - c), name='sphere',
        params={'center': c.tolist(), 'radius': float(radius)}, manifold_id=manifold_id,
    )


def level_of_potential(f: FlowField, c: float, box, manifold_id: str = '') -> AdmissibleManifold:
    """
    f_M(x) = -V(x) + c for a gradient field b = -grad V.

    The gradient of f_M is b itself, so <grad f_M, b> = |b|^2 on M.
    """
    if f.potential is None:
        raise ConfigError(f"Field '{f.name}' has no potential")
    value = float(c)

    def level(X):
        return value - f.V(X)

    return AdmissibleManifold(
        dim=f.dim, level=level, bounding_box=_box(box, f.dim), gradient_fn=f.b,
        name='level_of_potential', params={'c': value, 'field': f.name}, manifold_id=manifold_id,
    )


def hyperplane(normal: Sequence[float], offset: float, box, manifold_id: str = '') -> AdmissibleManifold:
    """f_M(x) = <normal, x> - offset, unbounded"""
    nrm = as_point(normal)
    if not np.any(nrm):
        raise ConfigError("Hyperplane normal must be nonzero")
    off = float(offset)
    return AdmissibleManifold(
        dim=nrm.shape[0], level=lambda X: X @ nrm - off, bounding_box=_box(box, nrm.shape[0]),
        gradient_fn=lambda x: nrm.copy(), name='hyperplane',
        params={'normal': nrm.tolist(), 'offset': off}, compact=False, manifold_id=manifold_id,
    )


def polynomial_level(terms: List[Sequence[Any]], box, manifold_id: str = '',
                     compact: bool = True) -> AdmissibleManifold:
    """
    Polynomial level function from a coefficient table.

    Args:
        terms: Entries [coefficient, exponents], one exponent per coordinate;
            the unit circle is [[1, [2, 0]], [1, [0, 2]], [-1, [0, 0]]]
        box: Bounding box (Box or [lower, upper])
    """
    if not terms:
        raise ConfigError("polynomial_level needs at least one term")
    n = len(terms[0][1])
    coeffs, powers = [], []
    for entry in terms:
        if len(entry) != 2 or len(entry[1]) != n:
            raise ConfigError(f"Terms must be [coefficient, {n} exponents], got {entry}")
        if any(int(e) != e or e < 0 for e in entry[1]):
            raise ConfigError(f"Exponents must be nonnegative integers, got {entry[1]}")
        coeffs.append(float(entry[0]))
        powers.append([int(e) for e in entry[1]])
    cs = np.array(coeffs)
    ps = np.array(powers, dtype=int)

    def level(X):
        return np.prod(X[:, None, :] ** ps[None, :, :], axis=-1) @ cs

    def gradient(x):
        g = np.zeros(n)
        for c, pw in zip(cs, ps):
            for j in range(n):
                if pw[j] == 0:
                    continue
                d = pw.copy()
                d[j] -= 1
                g[j] += c * pw[j] * float(np.prod(x ** d))
        return g

    return AdmissibleManifold(
        dim=n, level=level, bounding_box=_box(box, n), gradient_fn=gradient, name='polynomial_level',
        params={'terms': [[c, list(p)] for c, p in zip(coeffs, powers)]}, compact=compact,
        manifold_id=manifold_id,
    )


def stable_ball(f: FlowField, eq: Equilibrium, a: float, manifold_id: str = '',
                **distance_kwargs) -> AdmissibleManifold:
    """
    {f_s = a} around an attractor, {f_u = a} around a repellor.

    f_M(w) = f_s(w) - a. Points outside the basin get |w - eq| + a, which is
    positive like every point beyond the ball. Since f_s(w) >= |w - eq| the
    zero set lies in the ball of radius a. The locator finds crossings by
    travelling |f_s(x) - a| along the flowline instead of watching f_M.
    """
    if eq.kind not in (EquilibriumKind.ATTRACTOR, EquilibriumKind.REPELLOR):
        raise ConfigError(f"stable_ball needs an attractor or repellor, got {eq.kind.value}")
    if a <= 0.0:
        raise ConfigError(f"Ball level must be positive, got {a}")
    center = eq.point
    distance_kwargs.setdefault('scale', float(a))

    def pointwise_level(w: np.ndarray) -> float:
        try:
            return equilibrium_distance(f, eq, w, **distance_kwargs) - a
        except NotInBasinError:
            return float(np.linalg.norm(w - center)) + a

    def level(X):
        return np.array([pointwise_level(w) for w in X])

    attractor = eq.kind == EquilibriumKind.ATTRACTOR

    def find(x, t_max, opts, max_arclength):
        # f_s drops by the arclength travelled towards an attractor, f_u grows away from a repellor
        try:
            d = equilibrium_distance(f, eq, x, **distance_kwargs) - a
        except NotInBasinError:
            return None
        if abs(d) < BALL_LEVEL_TOL:
            return Located(x.copy(), 0.0, 0.0)
        if max_arclength is not None and abs(d) > max_arclength:
            return None
        direction = 1 if (d > 0.0) == attractor else -1
        try:
            reached = advance_arclength(f, x, abs(d), direction, t_max, opts)
        except DivergenceError:
            return None
        if reached is None:
            return None
        z, tau = reached
        return Located(z, -tau, abs(d))

    return AdmissibleManifold(
        dim=f.dim, level=level, bounding_box=Box.around(center, BALL_BOX_FACTOR * a),
        name='stable_ball', params={'center': center.tolist(), 'a': float(a), 'kind': eq.kind.value},
        manifold_id=manifold_id, h_grad=BALL_GRADIENT_STEP * max(float(a), 1e-3),
        locator=FlowLocator(f, find),
    )


PrimitiveBuilder = Callable[..., AdmissibleManifold]

PRIMITIVES: Dict[str, PrimitiveBuilder] = {
    'sphere': sphere,
    'level_of_potential': level_of_potential,
    'hyperplane': hyperplane,
    'polynomial_level': polynomial_level,
    'stable_ball': stable_ball,
}
