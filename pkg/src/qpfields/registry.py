"""
registry.py

Built-in drift fields keyed by name.

Each constructor takes keyword parameters and returns a FlowField with an
analytic Jacobian. Fields that are gradients carry their potential.
"""

from typing import Any, Callable, Dict, List, Sequence

import numpy as np

from src.qpcore import ConfigError

from .field import FlowField


def double_well() -> FlowField:
    """b = -grad V with V = (x^2 - 1)^2 / 4 + y^2 / 2: attractors (+-1, 0), saddle (0, 0)"""
    def drift(X):
        x, y = X[:, 0], X[:, 1]
        return np.stack([x - x ** 3, -y], axis=-1)

    def jac(p):
        return np.array([[1.0 - 3.0 * p[0] ** 2, 0.0], [0.0, -1.0]])

    def potential(X):
        return (X[:, 0] ** 2 - 1.0) ** 2 / 4.0 + X[:, 1] ** 2 / 2.0

    return FlowField(2, drift, jac, name='double_well', potential=potential)


def triple_well() -> FlowField:
    """b = -grad V with V = x^2 (x^2 - 1)^2 + y^2 / 2: attractors at x in {-1, 0, 1}"""
    def drift(X):
        x, y = X[:, 0], X[:, 1]
        return np.stack([-2.0 * x * (x ** 2 - 1.0) * (3.0 * x ** 2 - 1.0), -y], axis=-1)

    def jac(p):
        x = p[0]
        return np.array([[-(30.0 * x ** 4 - 24.0 * x ** 2 + 2.0), 0.0], [0.0, -1.0]])

    def potential(X):
        x = X[:, 0]
        return x ** 2 * (x ** 2 - 1.0) ** 2 + X[:, 1] ** 2 / 2.0

    return FlowField(2, drift, jac, name='triple_well', potential=potential)


def constant(vector: Sequence[float] = (1.0, 0.0)) -> FlowField:
    """Constant drift b(x) = vector"""
    v = np.asarray(vector, dtype=float).reshape(-1)
    n = v.shape[0]

    def drift(X):
        return np.broadcast_to(v, (X.shape[0], n)).copy()

    return FlowField(n, drift, lambda p: np.zeros((n, n)), name='constant',
                     params={'vector': v.tolist()},
                     potential=lambda X: -(X @ v))


def linear_radial(rate: float = 1.0, center: Sequence[float] = (0.0, 0.0)) -> FlowField:
    """b(x) = -rate (x - center): a single attractor (repellor for rate < 0)"""
    c = np.asarray(center, dtype=float).reshape(-1)
    n = c.shape[0]
    if rate == 0.0:
        raise ConfigError("linear_radial needs a nonzero rate")

    def drift(X):
        return -rate * (X - c)

    def potential(X):
        return 0.5 * rate * np.sum((X - c) ** 2, axis=1)

    return FlowField(n, drift, lambda p: -rate * np.eye(n), name='linear_radial',
                     params={'rate': rate, 'center': c.tolist()}, potential=potential)


def limit_cycle(omega: float = 1.0, radius: float = 1.0) -> FlowField:
    """
    b = (omega y + x (R^2 - r^2), -omega x + y (R^2 - r^2)).

    In polar form r' = r (R^2 - r^2), phase' = -omega: the circle r = R is an
    attracting cycle of period 2 pi / omega and the origin is a repellor.
    """
    R2 = float(radius) ** 2

    def drift(X):
        x, y = X[:, 0], X[:, 1]
        g = R2 - x ** 2 - y ** 2
        return np.stack([omega * y + x * g, -omega * x + y * g], axis=-1)

    def jac(p):
        x, y = p
        g = R2 - x * x - y * y
        return np.array([[g - 2 * x * x, omega - 2 * x * y],
                         [-omega - 2 * x * y, g - 2 * y * y]])

    return FlowField(2, drift, jac, name='limit_cycle', params={'omega': omega, 'radius': radius})


def birth_death_1d(birth: float = 1.0, death: float = 1.0) -> FlowField:
    """Natural drift birth - death * x of the birth-death jump process"""
    def drift(X):
        return birth - death * X

    def potential(X):
        return 0.5 * death * (X[:, 0] - birth / death) ** 2

    return FlowField(1, drift, lambda p: np.array([[-death]]), name='birth_death_1d',
                     params={'birth': birth, 'death': death}, potential=potential)


def polynomial(terms: List[List[Sequence[Any]]]) -> FlowField:
    """
    Polynomial drift from a coefficient table.

    Args:
        terms: One list per component; each entry is [coefficient, exponents]
            with one nonnegative integer exponent per coordinate, e.g. the
            double well is [[[1, [1, 0]], [-1, [3, 0]]], [[-1, [0, 1]]]]
    """
    n = len(terms)
    if n == 0:
        raise ConfigError("polynomial field needs at least one component")
    coeffs, powers = [], []
    for k, component in enumerate(terms):
        cs, ps = [], []
        for entry in component:
            if len(entry) != 2 or len(entry[1]) != n:
                raise ConfigError(f"Component {k}: terms must be [coefficient, {n} exponents], got {entry}")
            if any(int(e) != e or e < 0 for e in entry[1]):
                raise ConfigError(f"Component {k}: exponents must be nonnegative integers, got {entry[1]}")
            cs.append(float(entry[0]))
            ps.append([int(e) for e in entry[1]])
        coeffs.append(np.array(cs, dtype=float))
        powers.append(np.array(ps, dtype=int).reshape(-1, n))

    def drift(X):
        out = np.zeros((X.shape[0], n))
        for k in range(n):
            if len(coeffs[k]):
                mono = np.prod(X[:, None, :] ** powers[k][None, :, :], axis=-1)
                out[:, k] = mono @ coeffs[k]
        return out

    def jac(p):
        J = np.zeros((n, n))
        for k in range(n):
            for c, pw in zip(coeffs[k], powers[k]):
                for j in range(n):
                    if pw[j] == 0:
                        continue
                    d = pw.copy()
                    d[j] -= 1
                    J[k, j] += c * pw[j] * float(np.prod(p ** d))
        return J

    return FlowField(n, drift, jac, name='polynomial', params={'terms': terms})


FIELD_REGISTRY: Dict[str, Callable[..., FlowField]] = {
    'double_well': double_well,
    'triple_well': triple_well,
    'constant': constant,
    'linear_radial': linear_radial,
    'limit_cycle': limit_cycle,
    'birth_death_1d': birth_death_1d,
    'polynomial': polynomial,
}


def available_fields() -> List[str]:
    return sorted(FIELD_REGISTRY)


def build_field(name: str, params: Dict[str, Any] = None) -> FlowField:
    """
    Construct a registered field.

    Raises:
        ConfigError: Unknown name or parameters
    """
    if name not in FIELD_REGISTRY:
        raise ConfigError(f"Unknown field '{name}'; available: {', '.join(available_fields())}")
    params = dict(params or {})
    try:
        f = FIELD_REGISTRY[name](**params)
    except TypeError as exc:
        raise ConfigError(f"Bad parameters for field '{name}': {exc}") from exc
    if not f.params:
        f = FlowField(f.dim, f.drift, f.jacobian_fn, name=f.name, params=params, potential=f.potential)
    return f
