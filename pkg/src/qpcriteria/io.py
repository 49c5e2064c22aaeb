"""
io.py

Verdict output: a JSON array of verdict objects and a plotting CSV with
header `x1,...,xn,verdict,criterion,margin`. Both are deterministic for a
given verdict list (sorted keys, 17 significant digits).
"""

import csv
import io
import json
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Union

import numpy as np

from .verdicts import CriteriaVerdict, summarize


def _fmt(value: float) -> str:
    return '' if np.isnan(value) else format(float(value), '.17g')


def format_verdicts_csv(verdicts: Sequence[CriteriaVerdict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator='\n')
    dim = len(verdicts[0].point) if verdicts else 0
    writer.writerow([f"x{k + 1}" for k in range(dim)] + ['verdict', 'criterion', 'margin'])
    for v in verdicts:
        writer.writerow([_fmt(c) for c in v.point]
                        + [v.verdict.value, '' if v.criterion is None else v.criterion.value, _fmt(v.margin)])
    return buf.getvalue()


def write_verdicts_csv(verdicts: Sequence[CriteriaVerdict], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(format_verdicts_csv(verdicts), encoding='utf-8', newline='\n')
    return path


def verdicts_document(verdicts: Sequence[CriteriaVerdict], context: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Verdicts with their summary and, optionally, the scenario context"""
    doc: Dict[str, Any] = {'summary': summarize(verdicts).to_dict(), 'verdicts': [v.to_dict() for v in verdicts]}
    if context is not None:
        doc['context'] = context
    return doc


def format_verdicts_json(verdicts: Sequence[CriteriaVerdict]) -> str:
    """The bare JSON array of verdict objects"""
    return json.dumps([v.to_dict() for v in verdicts], indent=2, sort_keys=True) + '\n'


def write_verdicts_json(verdicts: Sequence[CriteriaVerdict], path: Union[str, Path],
                        context: Optional[Dict[str, Any]] = None) -> Path:
    """Write the verdict array, or a document with summary and context when context is given"""
    path = Path(path)
    if context is None:
        text = format_verdicts_json(verdicts)
    else:
        text = json.dumps(verdicts_document(verdicts, context), indent=2, sort_keys=True) + '\n'
    path.write_text(text, encoding='utf-8', newline='\n')
    return path
