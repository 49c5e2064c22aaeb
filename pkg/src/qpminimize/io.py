"""
io.py

Minimizer output: the curve CSV (`i,x1,...,xn,s`) next to a JSON sidecar
with the action, iteration count, convergence flag, seed and parameters.
"""

import json
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

from src.qpcurves import write_curve_csv

from .problem import MinimizeResult


def result_document(result: MinimizeResult, extra: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Sidecar content, optionally merged with further report sections"""
    doc = result.to_dict()
    if extra:
        doc.update(extra)
    return doc


def write_minimize_result(result: MinimizeResult, out_dir: Union[str, Path], stem: str = 'minimizer',
                          extra: Optional[Dict[str, Any]] = None) -> Tuple[Path, Path]:
    """
    Write `<stem>.csv` and `<stem>.json` into out_dir.

    Returns:
        (csv path, json path)
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = write_curve_csv(result.curve, out / f"{stem}.csv")
    json_path = out / f"{stem}.json"
    text = json.dumps(result_document(result, extra), indent=2, sort_keys=True) + '\n'
    json_path.write_text(text, encoding='utf-8', newline='\n')
    return csv_path, json_path
