"""
verdicts.py

Per-point existence verdicts and their summaries.
"""

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.qpcore import ConfigError


class Verdict(str, Enum):
    """Outcome of the existence criteria at one point"""
    STRONG = "strong"
    WEAK = "weak"
    NONE_APPLICABLE = "none-applicable"
    NON_EXISTENCE = "non-existence"


class Criterion(str, Enum):
    """Which criterion produced a verdict"""
    PROP0 = "prop0"
    PROP1 = "prop1"
    PROP2_ATTRACTOR = "prop2-attractor"
    PROP2_REPELLOR = "prop2-repellor"
    PROP2_SADDLE = "prop2-saddle"
    LIMIT_CYCLE_NEGATIVE = "limit-cycle-negative"


STRONG_CRITERIA = frozenset({
    Criterion.PROP0, Criterion.PROP1,
    Criterion.PROP2_ATTRACTOR, Criterion.PROP2_REPELLOR, Criterion.PROP2_SADDLE,
})
WEAK_CRITERIA = frozenset({Criterion.PROP2_ATTRACTOR, Criterion.PROP2_REPELLOR, Criterion.PROP2_SADDLE})


@dataclass(frozen=True)
class CriteriaVerdict:
    """
    Verdict at one point

    Attributes:
        point: The classified point
        verdict: strong / weak / none-applicable / non-existence
        criterion: Criterion that fired (None for none-applicable)
        evidence: Diagnostics (margins, manifold ids, eigenvalues, fits)
        margin: One number per verdict for plotting: the smallest sampled
            action (-H(x, 0) for Hamiltonian actions) for prop0, the
            |crossing time| for prop1, the fitted Hoelder slope for prop2
            (0 when not fitted), the distance to the cycle for
            non-existence and NaN otherwise
    """
    point: Tuple[float, ...]
    verdict: Verdict
    criterion: Optional[Criterion] = None
    evidence: Dict[str, Any] = field(default_factory=dict)
    margin: float = float('nan')

    def __post_init__(self):
        if self.verdict == Verdict.STRONG and self.criterion not in STRONG_CRITERIA:
            raise ConfigError(f"A strong verdict needs a prop0/1/2 criterion, got {self.criterion}")
        if self.verdict == Verdict.WEAK and self.criterion not in WEAK_CRITERIA:
            raise ConfigError(f"A weak verdict comes from prop2 only, got {self.criterion}")
        if self.verdict == Verdict.NON_EXISTENCE and self.criterion != Criterion.LIMIT_CYCLE_NEGATIVE:
            raise ConfigError("A non-existence verdict needs the limit-cycle criterion")

    @property
    def location(self) -> np.ndarray:
        return np.asarray(self.point, dtype=float)

    @property
    def has_minimizers(self) -> bool:
        return self.verdict in (Verdict.STRONG, Verdict.WEAK)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'point': list(self.point),
            'verdict': self.verdict.value,
            'criterion': None if self.criterion is None else self.criterion.value,
            'margin': None if np.isnan(self.margin) else float(self.margin),
            'evidence': self.evidence,
        }


def none_applicable(x, **evidence) -> CriteriaVerdict:
    return CriteriaVerdict(tuple(float(v) for v in np.asarray(x, dtype=float).reshape(-1)),
                           Verdict.NONE_APPLICABLE, None, dict(evidence))


@dataclass(frozen=True)
class VerdictSummary:
    """Counts of verdicts and criteria over a classified point set"""
    total: int
    by_verdict: Dict[str, int]
    by_criterion: Dict[str, int]

    @property
    def covered(self) -> int:
        return self.by_verdict.get(Verdict.STRONG.value, 0) + self.by_verdict.get(Verdict.WEAK.value, 0)

    @property
    def coverage(self) -> float:
        return self.covered / self.total if self.total else 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {'total': self.total, 'by_verdict': dict(self.by_verdict),
                'by_criterion': dict(self.by_criterion), 'coverage': self.coverage}


def summarize(verdicts: Sequence[CriteriaVerdict]) -> VerdictSummary:
    by_verdict = Counter(v.verdict.value for v in verdicts)
    by_criterion = Counter(v.criterion.value if v.criterion else 'none' for v in verdicts)
    return VerdictSummary(len(verdicts), dict(sorted(by_verdict.items())), dict(sorted(by_criterion.items())))


def points_with(verdicts: Sequence[CriteriaVerdict], verdict: Verdict) -> List[Tuple[float, ...]]:
    return [v.point for v in verdicts if v.verdict == verdict]
