"""
validators.py

Curve invariant checks.

`validate_curve` answers yes/no; `assert_curve_invariants` raises the
matching error. Checks use explicit exceptions so they stay active under -O.
"""

from typing import Optional

import numpy as np

from src.qpcore import DegenerateCurveError, InvalidCurveError

from .curve import ArcCurve, Curve, curve_length

SPACING_RTOL = 1e-9


def validate_curve(c, dim: Optional[int] = None) -> bool:
    """
    Check a node list without raising.

    Args:
        c: Curve or node array
        dim: Required dimension (optional)

    Returns:
        True if nodes are finite, share one dimension (matching `dim` when
        given) and the curve has at least two nodes
    """
    try:
        curve = c if isinstance(c, Curve) else Curve(c, degenerate=True)
    except (InvalidCurveError, DegenerateCurveError):
        return False
    return dim is None or curve.dim == dim


def assert_curve_invariants(c: Curve, dim: Optional[int] = None,
                            require_length: bool = False, operation: str = "curve") -> None:
    """
    Raise if a curve breaks its invariants.

    Args:
        c: Curve to check
        dim: Required dimension (optional)
        require_length: Reject zero-length curves
        operation: Name used in error messages

    Raises:
        InvalidCurveError: Dimension mismatch or non-finite nodes
        DegenerateCurveError: Zero length when require_length is set
    """
    nodes = np.asarray(c.nodes, dtype=float)
    if not np.all(np.isfinite(nodes)):
        raise InvalidCurveError(f"{operation}: non-finite node coordinates")
    if dim is not None and c.dim != dim:
        raise InvalidCurveError(f"{operation}: curve dimension {c.dim} != expected {dim}")
    if require_length and curve_length(c) <= 0.0:
        raise DegenerateCurveError(f"{operation}: curve has zero length")


def spacing_deviation(c: ArcCurve) -> float:
    """
    Largest relative deviation of the arclength spacing from uniform.

    Measured on the stored arclength positions, which is what the
    reparameterization guarantees (chord lengths can be shorter at corners).
    """
    steps = np.diff(c.cumulative_length)
    mean = float(np.mean(steps))
    if mean == 0.0:
        return 0.0
    return float(np.max(np.abs(steps - mean)) / mean)


def is_arclength_uniform(c: ArcCurve, rtol: float = SPACING_RTOL) -> bool:
    """True iff node spacing along the source polyline is uniform within rtol"""
    return spacing_deviation(c) <= rtol
