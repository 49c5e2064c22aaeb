"""
manifold.py

Admissible manifolds represented by level functions.

A manifold is M = f_M^{-1}({0}) inside a bounding box. The level function is
evaluated in batches, (N, n) -> (N,), like the drifts of qpfields. The
orientation flag multiplies f_M, so flipping a manifold never rebuilds it.
"""

from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, NamedTuple, Optional

import numpy as np

from src.qpcore import Box, ConfigError, numerical_gradient

BatchLevel = Callable[[np.ndarray], np.ndarray]

GRADIENT_STEP = 1e-6


class Located(NamedTuple):
    """Foot point z on M, signed time t with psi(z, t) = x, and the flowline length |z -> x|"""
    z: np.ndarray
    t: float
    arclength: float


class FlowLocator(NamedTuple):
    """
    Closed-form crossing search valid for one drift field.

    find(x, t_max, opts, max_arclength) returns a Located or None.
    """
    field: Any
    find: Callable[..., Optional[Located]]


@dataclass(frozen=True)
class AdmissibleManifold:
    """
    Level-set manifold M = {f_M = 0}

    Attributes:
        dim: Ambient dimension
        level: Batched level function, (N, n) -> (N,)
        bounding_box: Box containing the zero set
        gradient_fn: Analytic gradient x -> (n,); central differences when None
        name: Primitive name (or 'custom')
        params: Parameters used to build the manifold (for reports)
        orientation: +1 or -1, multiplies level and gradient
        compact: False for unbounded zero sets such as hyperplanes
        manifold_id: Identifier used in verdict evidence
        h_grad: Finite-difference step
        locator: Shortcut for locate() under the field it was built for
    """
    dim: int
    level: BatchLevel
    bounding_box: Box
    gradient_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    name: str = 'custom'
    params: Dict[str, Any] = field(default_factory=dict)
    orientation: int = 1
    compact: bool = True
    manifold_id: str = ''
    h_grad: float = GRADIENT_STEP
    locator: Optional[FlowLocator] = None

    def __post_init__(self):
        if self.orientation not in (1, -1):
            raise ConfigError(f"Orientation must be +1 or -1, got {self.orientation}")
        if self.bounding_box.dim != self.dim:
            raise ConfigError(f"Bounding box has dimension {self.bounding_box.dim}, manifold {self.dim}")

    @property
    def id(self) -> str:
        return self.manifold_id or self.name

    def values(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float).reshape(-1, self.dim)
        return self.orientation * np.asarray(self.level(X), dtype=float).reshape(-1)

    def value(self, x) -> float:
        return float(self.values(np.asarray(x, dtype=float).reshape(1, self.dim))[0])

    def gradient(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float).reshape(self.dim)
        if self.gradient_fn is not None:
            return self.orientation * np.asarray(self.gradient_fn(x), dtype=float).reshape(self.dim)
        return numerical_gradient(self.value, x, self.h_grad)

    def oriented(self, sign: int) -> 'AdmissibleManifold':
        """Same zero set with f_M multiplied by sign"""
        if sign not in (1, -1):
            raise ConfigError(f"Orientation must be +1 or -1, got {sign}")
        return replace(self, orientation=self.orientation * sign)

    def with_id(self, manifold_id: str) -> 'AdmissibleManifold':
        return replace(self, manifold_id=manifold_id)

    def to_dict(self) -> Dict[str, Any]:
        return {'id': self.id, 'name': self.name, 'dim': self.dim, 'params': dict(self.params),
                'orientation': self.orientation, 'compact': self.compact,
                'bounding_box': self.bounding_box.to_dict()}
