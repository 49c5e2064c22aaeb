"""
io.py

Curve CSV: header `i,x1,...,xn,s` with s the cumulative arclength, one node
per row, UTF-8, LF line endings. Floats are written with 17 significant
digits so a write/read cycle reproduces the nodes exactly.
"""

import csv
import io
from pathlib import Path
from typing import Union

from src.qpcore import InvalidCurveError

from .curve import Curve, as_curve


def _fmt(value: float) -> str:
    return format(float(value), '.17g')


def format_curve_csv(c: Curve) -> str:
    """Render a curve as CSV text"""
    c = as_curve(c)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(['i'] + [f"x{k + 1}" for k in range(c.dim)] + ['s'])
    for i, (node, s) in enumerate(zip(c.nodes, c.cumulative())):
        writer.writerow([i] + [_fmt(v) for v in node] + [_fmt(s)])
    return buf.getvalue()


def write_curve_csv(c: Curve, path: Union[str, Path]) -> Path:
    """Write a curve CSV file; returns the path"""
    path = Path(path)
    path.write_text(format_curve_csv(c), encoding='utf-8', newline='\n')
    return path


def parse_curve_csv(text: str, dim: int = None) -> Curve:
    """
    Parse curve CSV text.

    Args:
        text: CSV content with the `i,x1..xn,s` header
        dim: Expected dimension (optional)

    Returns:
        Curve (zero-length curves allowed, flagged degenerate)

    Raises:
        InvalidCurveError: Bad header, ragged or non-numeric rows, wrong dimension
    """
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r]
    if not rows:
        raise InvalidCurveError("Curve CSV is empty")
    header = [h.strip() for h in rows[0]]
    n = len(header) - 2
    expected = ['i'] + [f"x{k + 1}" for k in range(n)] + ['s']
    if n < 1 or header != expected:
        raise InvalidCurveError(f"Curve CSV header must be {','.join(expected)}, got {','.join(header)}")
    if dim is not None and n != dim:
        raise InvalidCurveError(f"Curve CSV has dimension {n}, expected {dim}")
    nodes = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise InvalidCurveError(f"line {lineno}: expected {len(header)} fields, got {len(row)}")
        try:
            nodes.append([float(v) for v in row[1:-1]])
        except ValueError as exc:
            raise InvalidCurveError(f"line {lineno}: {exc}") from exc
    return Curve(nodes, degenerate=True)


def read_curve_csv(path: Union[str, Path], dim: int = None) -> Curve:
    """Read a curve CSV file"""
    return parse_curve_csv(Path(path).read_text(encoding='utf-8'), dim=dim)
