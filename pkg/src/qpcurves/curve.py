"""
curve.py

Polyline model of unparameterized oriented curves.

A Curve is an ordered node list; every integral over a curve uses one
evaluation per chord at the chord midpoint. Node count is the only
resolution knob: the minimizer redistributes nodes by arclength, so uniform
spacing is the contract between layers.

Invariants:
- All nodes share one dimension and are finite
- Total length is positive unless the curve is flagged degenerate
- Curves are immutable; every operation returns a new curve
"""

from typing import Callable, Sequence

import numpy as np

from src.qpcore import (
    ConfigError,
    DegenerateCurveError,
    EndpointMismatchError,
    InvalidCurveError,
    pairwise_sum,
)

JUNCTION_TOL = 1e-9


def _as_node_array(nodes) -> np.ndarray:
    try:
        arr = np.array(nodes, dtype=float)
    except (ValueError, TypeError) as exc:
        raise InvalidCurveError(f"Nodes do not share one dimension: {exc}") from exc
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise InvalidCurveError(f"Nodes must form an (m, n) array, got shape {arr.shape}")
    if arr.shape[0] < 2:
        raise InvalidCurveError(f"A curve needs at least 2 nodes, got {arr.shape[0]}")
    if arr.shape[1] < 1:
        raise InvalidCurveError("Nodes must have dimension >= 1")
    if not np.all(np.isfinite(arr)):
        raise InvalidCurveError("Nodes contain non-finite coordinates")
    return arr


class Curve:
    """
    Oriented polyline in R^n

    Attributes:
        nodes: (m, n) read-only array, m >= 2
        degenerate: True when a zero-length curve is allowed

    Raises:
        InvalidCurveError: ragged, non-finite or too few nodes
        DegenerateCurveError: zero total length without the degenerate flag
    """

    __slots__ = ('_nodes', 'degenerate')

    def __init__(self, nodes, degenerate: bool = False):
        arr = _as_node_array(nodes)
        arr.setflags(write=False)
        self._nodes = arr
        self.degenerate = degenerate
        if not degenerate and not np.any(np.diff(arr, axis=0)):
            raise DegenerateCurveError("Curve has zero length; pass degenerate=True to allow it")

    @property
    def nodes(self) -> np.ndarray:
        return self._nodes

    @property
    def dim(self) -> int:
        return int(self._nodes.shape[1])

    @property
    def start(self) -> np.ndarray:
        return self._nodes[0].copy()

    @property
    def end(self) -> np.ndarray:
        return self._nodes[-1].copy()

    def chords(self) -> np.ndarray:
        """Chord vectors, shape (m-1, n)"""
        return np.diff(self._nodes, axis=0)

    def midpoints(self) -> np.ndarray:
        """Chord midpoints, shape (m-1, n)"""
        return 0.5 * (self._nodes[1:] + self._nodes[:-1])

    def chord_lengths(self) -> np.ndarray:
        return np.linalg.norm(self.chords(), axis=1)

    def cumulative(self) -> np.ndarray:
        """Cumulative arclength at every node, starting at 0"""
        return np.concatenate([[0.0], np.cumsum(self.chord_lengths())])

    def __len__(self) -> int:
        return int(self._nodes.shape[0])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Curve):
            return NotImplemented
        return self._nodes.shape == other._nodes.shape and bool(np.array_equal(self._nodes, other._nodes))

    def __repr__(self) -> str:
        return f"Curve(nodes={len(self)}, dim={self.dim}, length={curve_length(self):.6g})"


class ArcCurve(Curve):
    """
    Curve whose nodes sit at equal arclength spacing along a source polyline

    Attributes:
        cumulative_length: Arclength position of every node along the source
            polyline; starts at 0 and ends at the source length
    """

    __slots__ = ('cumulative_length',)

    def __init__(self, nodes, cumulative_length: Sequence[float]):
        super().__init__(nodes)
        cum = np.array(cumulative_length, dtype=float)
        if cum.shape != (len(self),):
            raise InvalidCurveError(
                f"cumulative_length has {cum.shape[0]} entries for {len(self)} nodes"
            )
        if cum[0] != 0.0 or np.any(np.diff(cum) < 0):
            raise InvalidCurveError("cumulative_length must start at 0 and be nondecreasing")
        cum.setflags(write=False)
        self.cumulative_length = cum

    @property
    def spacing(self) -> float:
        return float(self.cumulative_length[-1] / (len(self) - 1))

    def fractions(self) -> np.ndarray:
        """Normalised arclength parameter alpha in [0, 1] at every node"""
        return self.cumulative_length / self.cumulative_length[-1]


def as_curve(c) -> Curve:
    """Accept a Curve or anything convertible to a node array"""
    return c if isinstance(c, Curve) else Curve(c, degenerate=True)


def curve_length(c: Curve) -> float:
    """
    Total length: sum of consecutive chord lengths.

    Args:
        c: Curve (or node array)

    Returns:
        Length >= 0

    Raises:
        InvalidCurveError: Nodes do not share a dimension
    """
    return pairwise_sum(as_curve(c).chord_lengths())


def _interpolate_at(c: Curve, targets: np.ndarray) -> np.ndarray:
    cum = c.cumulative()
    # drop repeated nodes so the arclength abscissa is strictly increasing
    keep = np.concatenate([[True], np.diff(cum) > 0])
    cum, pts = cum[keep], c.nodes[keep]
    return np.stack([np.interp(targets, cum, pts[:, k]) for k in range(c.dim)], axis=-1)


def reparameterize_arclength(c: Curve, m: int) -> ArcCurve:
    """
    Resample a curve at m nodes with equal arclength spacing.

    Args:
        c: Source curve
        m: Node count (>= 2)

    Returns:
        ArcCurve on the polyline of c; endpoints preserved exactly

    Raises:
        ConfigError: m < 2
        DegenerateCurveError: c has zero length
    """
    if m < 2:
        raise ConfigError(f"Node count must be >= 2, got {m}")
    c = as_curve(c)
    total = curve_length(c)
    if total <= 0.0:
        raise DegenerateCurveError("Cannot reparameterize a zero-length curve")
    targets = np.linspace(0.0, total, m)
    nodes = _interpolate_at(c, targets)
    nodes[0] = c.nodes[0]
    nodes[-1] = c.nodes[-1]
    return ArcCurve(nodes, targets)


def resample_fractions(c: Curve, fractions: Sequence[float]) -> Curve:
    """
    Nodes at the given arclength fractions (nonuniform resampling).

    Fractions are sorted and 0 and 1 are always included, so the result lies
    on the same polyline with the same endpoints.
    """
    c = as_curve(c)
    total = curve_length(c)
    if total <= 0.0:
        raise DegenerateCurveError("Cannot resample a zero-length curve")
    fr = np.unique(np.clip(np.concatenate([[0.0], np.asarray(fractions, float), [1.0]]), 0.0, 1.0))
    nodes = _interpolate_at(c, fr * total)
    nodes[0] = c.nodes[0]
    nodes[-1] = c.nodes[-1]
    return Curve(nodes)


def restricted_length(c: Curve, indicator: Callable[[np.ndarray], bool]) -> float:
    """
    Length of the part of c inside a set E, classified by chord midpoints.

    Args:
        c: Curve
        indicator: Predicate on points (membership in E)

    Returns:
        Sum of chord lengths whose midpoint satisfies the predicate;
        between 0 and curve_length(c)
    """
    c = as_curve(c)
    lengths = c.chord_lengths()
    mask = np.array([bool(indicator(m)) for m in c.midpoints()], dtype=bool)
    return pairwise_sum(np.where(mask, lengths, 0.0))


def concat(a: Curve, b: Curve, tol: float = JUNCTION_TOL) -> Curve:
    """
    Join b after a, dropping the duplicated junction node.

    Raises:
        InvalidCurveError: Dimension mismatch
        EndpointMismatchError: |a.end - b.start| > tol
    """
    a, b = as_curve(a), as_curve(b)
    if a.dim != b.dim:
        raise InvalidCurveError(f"Cannot join curves of dimension {a.dim} and {b.dim}")
    gap = float(np.linalg.norm(a.nodes[-1] - b.nodes[0]))
    if gap > tol:
        raise EndpointMismatchError(f"Junction mismatch: gap {gap:.3e} > {tol:g}", gap=gap)
    nodes = np.vstack([a.nodes, b.nodes[1:]])
    return Curve(nodes, degenerate=a.degenerate and b.degenerate)


def reverse(c: Curve) -> Curve:
    """Same polyline with opposite orientation"""
    c = as_curve(c)
    return Curve(c.nodes[::-1], degenerate=c.degenerate)


def segment(a, b, m: int = 2) -> Curve:
    """Straight polyline from a to b with m equally spaced nodes"""
    if m < 2:
        raise ConfigError(f"Node count must be >= 2, got {m}")
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    t = np.linspace(0.0, 1.0, m)[:, None]
    return Curve((1.0 - t) * a + t * b)


def point_to_polyline_distance(points, c: Curve) -> np.ndarray:
    """Euclidean distance from each point to the polyline of c"""
    c = as_curve(c)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    a = c.nodes[:-1][None, :, :]
    d = c.chords()[None, :, :]
    p = pts[:, None, :]
    denom = np.maximum(np.sum(d * d, axis=-1), 1e-300)
    t = np.clip(np.sum((p - a) * d, axis=-1) / denom, 0.0, 1.0)
    closest = a + t[..., None] * d
    return np.min(np.linalg.norm(p - closest, axis=-1), axis=1)

