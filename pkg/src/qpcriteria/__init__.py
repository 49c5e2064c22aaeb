"""
QPCriteria: existence verdicts for local minimizers

Layer 6 of the quasipath stack. Checks the hypotheses of the existence
criteria numerically and turns them into per-point verdicts: positive local
action (prop0), flowlines through admissible manifolds (prop1), equilibria
with the Hoelder regression (prop2), potential roots through a borrowed
repelling drift, and non-existence on limit cycles.

Invariants:
- strong verdicts come from prop0, prop1 or prop2; non-existence only from
  the limit-cycle criterion
- every prop1 verdict records a foot point with |f_M| < 1e-8
- classification is a pure function of context, points and seeds
"""

from .verdicts import (
    Verdict,
    Criterion,
    CriteriaVerdict,
    VerdictSummary,
    none_applicable,
    summarize,
    points_with,
)
from .holder import HOLDER_ASSUMPTION, HolderCheck, HolderFit, holder_fit, check_holder
from .props import (
    TOL_POS,
    CriteriaOptions,
    DEFAULT_CRITERIA,
    SaddleCoverage,
    check_prop0,
    check_prop1,
    check_prop2,
    saddle_coverage,
    check_local_root,
)
from .classify import CriteriaContext, build_context, classify_point, classify_points, classify_grid
from .io import (
    format_verdicts_csv,
    write_verdicts_csv,
    verdicts_document,
    format_verdicts_json,
    write_verdicts_json,
)

__all__ = [
    'Verdict',
    'Criterion',
    'CriteriaVerdict',
    'VerdictSummary',
    'none_applicable',
    'summarize',
    'points_with',
    'HOLDER_ASSUMPTION',
    'HolderCheck',
    'HolderFit',
    'holder_fit',
    'check_holder',
    'TOL_POS',
    'CriteriaOptions',
    'DEFAULT_CRITERIA',
    'SaddleCoverage',
    'check_prop0',
    'check_prop1',
    'check_prop2',
    'saddle_coverage',
    'check_local_root',
    'CriteriaContext',
    'build_context',
    'classify_point',
    'classify_points',
    'classify_grid',
    'format_verdicts_csv',
    'write_verdicts_csv',
    'verdicts_document',
    'format_verdicts_json',
    'write_verdicts_json',
]

__version__ = '0.1.0'
__layer__ = 6
