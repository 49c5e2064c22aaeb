"""
QPCurves: discrete oriented curves

Layer 1 of the quasipath stack. Curves are polylines; lengths, restricted
lengths and every action integral use one evaluation per chord midpoint.

Invariants:
- curve_length is never increased by reparameterize_arclength
- curve_length(reverse(c)) == curve_length(c) exactly
- restricted lengths over complementary predicates sum to the full length
"""

from .curve import (
    Curve,
    ArcCurve,
    as_curve,
    curve_length,
    reparameterize_arclength,
    resample_fractions,
    restricted_length,
    concat,
    reverse,
    segment,
    point_to_polyline_distance,
)
from .validators import validate_curve, assert_curve_invariants, spacing_deviation, is_arclength_uniform
from .io import format_curve_csv, write_curve_csv, parse_curve_csv, read_curve_csv

__all__ = [
    'Curve',
    'ArcCurve',
    'as_curve',
    'curve_length',
    'reparameterize_arclength',
    'resample_fractions',
    'restricted_length',
    'concat',
    'reverse',
    'segment',
    'point_to_polyline_distance',
    'validate_curve',
    'assert_curve_invariants',
    'spacing_deviation',
    'is_arclength_uniform',
    'format_curve_csv',
    'write_curve_csv',
    'parse_curve_csv',
    'read_curve_csv',
]

__version__ = '0.1.0'
__layer__ = 1
