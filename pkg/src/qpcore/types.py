"""
types.py

Axis-aligned boxes and tensor grids used as compacts K, search regions and
classification grids.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.stats import qmc

from .errors import ConfigError


def as_point(x, dim: Optional[int] = None) -> np.ndarray:
    """
    Convert to a finite float vector.

    Args:
        x: Scalar or sequence of coordinates
        dim: Expected dimension (checked when given)

    Returns:
        1-D float array

    Raises:
        ConfigError: On dimension mismatch or non-finite coordinates
    """
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if arr.ndim != 1:
        raise ConfigError(f"Point must be a vector, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise ConfigError(f"Point has dimension {arr.shape[0]}, expected {dim}")
    if not np.all(np.isfinite(arr)):
        raise ConfigError(f"Point has non-finite coordinates: {arr}")
    return arr


@dataclass(frozen=True)
class Box:
    """
    Axis-aligned box [lower, upper] in R^n

    Attributes:
        lower: Lower corner
        upper: Upper corner (strictly above lower in every coordinate)
    """
    lower: Tuple[float, ...]
    upper: Tuple[float, ...]

    def __post_init__(self):
        if len(self.lower) != len(self.upper) or len(self.lower) == 0:
            raise ConfigError(f"Box corners differ in dimension: {self.lower} vs {self.upper}")
        for lo, hi in zip(self.lower, self.upper):
            if not (math.isfinite(lo) and math.isfinite(hi)) or lo >= hi:
                raise ConfigError(f"Empty box: lower={self.lower}, upper={self.upper}")

    @classmethod
    def from_bounds(cls, lower: Sequence[float], upper: Sequence[float]) -> 'Box':
        return cls(tuple(float(v) for v in lower), tuple(float(v) for v in upper))

    @classmethod
    def around(cls, center: Sequence[float], half_width: float) -> 'Box':
        """Cube of the given half width centred at a point"""
        c = as_point(center)
        return cls.from_bounds(c - half_width, c + half_width)

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def lo(self) -> np.ndarray:
        return np.asarray(self.lower, dtype=float)

    @property
    def hi(self) -> np.ndarray:
        return np.asarray(self.upper, dtype=float)

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (self.lo + self.hi)

    @property
    def scale(self) -> float:
        """Length of the diagonal"""
        return float(np.linalg.norm(self.hi - self.lo))

    def contains(self, x, tol: float = 0.0) -> bool:
        p = np.asarray(x, dtype=float)
        return bool(np.all(p >= self.lo - tol) and np.all(p <= self.hi + tol))

    def contains_all(self, points, tol: float = 0.0) -> bool:
        pts = np.asarray(points, dtype=float).reshape(-1, self.dim)
        return bool(np.all(pts >= self.lo - tol) and np.all(pts <= self.hi + tol))

    def clip(self, points) -> np.ndarray:
        return np.clip(np.asarray(points, dtype=float), self.lo, self.hi)

    def padded(self, fraction: float) -> 'Box':
        pad = fraction * (self.hi - self.lo)
        return Box.from_bounds(self.lo - pad, self.hi + pad)

    def union(self, other: 'Box') -> 'Box':
        return Box.from_bounds(np.minimum(self.lo, other.lo), np.maximum(self.hi, other.hi))

    def sample(self, rng: np.random.Generator, m: int) -> np.ndarray:
        """Uniform random points, shape (m, dim)"""
        return self.lo + (self.hi - self.lo) * rng.random((m, self.dim))

    def sobol(self, m: int, seed: int) -> np.ndarray:
        """
        Scrambled Sobol points in the box, shape (m, dim)

        Draws the next power of two and keeps the first m so the sequence
        keeps its balance properties.
        """
        if m < 1:
            raise ConfigError(f"Sample count must be positive, got {m}")
        sampler = qmc.Sobol(d=self.dim, scramble=True, seed=seed)
        unit = sampler.random_base2(max(0, math.ceil(math.log2(m))))[:m]
        return qmc.scale(unit, self.lo, self.hi)

    def boundary_points(self, per_face: int, rng: np.random.Generator) -> np.ndarray:
        """Random points on every face of the box"""
        faces = []
        for k in range(self.dim):
            for side in (self.lo[k], self.hi[k]):
                pts = self.sample(rng, per_face)
                pts[:, k] = side
                faces.append(pts)
        return np.vstack(faces)

    def to_dict(self) -> dict:
        return {'lower': list(self.lower), 'upper': list(self.upper)}


@dataclass(frozen=True)
class GridSpec:
    """
    Tensor grid over a box

    Attributes:
        box: Region covered (corners included)
        counts: Points per axis (each >= 1; a count of 1 uses the box centre)
    """
    box: Box
    counts: Tuple[int, ...]

    def __post_init__(self):
        if len(self.counts) != self.box.dim:
            raise ConfigError(f"Grid counts {self.counts} do not match box dimension {self.box.dim}")
        if any(int(c) < 1 for c in self.counts):
            raise ConfigError(f"Grid counts must be >= 1, got {self.counts}")

    @property
    def size(self) -> int:
        return int(np.prod(self.counts))

    def axes(self):
        out = []
        for lo, hi, c in zip(self.box.lower, self.box.upper, self.counts):
            out.append(np.array([0.5 * (lo + hi)]) if c == 1 else np.linspace(lo, hi, int(c)))
        return out

    def points(self) -> np.ndarray:
        """All grid points in C order, shape (size, dim)"""
        mesh = np.meshgrid(*self.axes(), indexing='ij')
        return np.stack([m.ravel() for m in mesh], axis=-1)
