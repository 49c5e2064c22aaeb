"""
export.py

Scenario export in multiple formats.
"""

from enum import Enum
from pathlib import Path
from typing import Union

import yaml

from src.qpledger import pretty_json

from .models import Scenario


class ExportFormat(Enum):
    """Supported export formats"""
    JSON = "json"
    YAML = "yaml"
    SUMMARY = "summary"


class ScenarioExporter:
    """Exports scenarios; JSON output is canonical (sorted keys)"""

    @staticmethod
    def export(scenario: Scenario, fmt: ExportFormat = ExportFormat.JSON) -> str:
        data = scenario.model_dump(mode='json', exclude_none=True)
        if fmt == ExportFormat.JSON:
            return pretty_json(data)
        if fmt == ExportFormat.YAML:
            return yaml.safe_dump(data, sort_keys=True, default_flow_style=None)
        return ScenarioExporter._summary(scenario)

    @staticmethod
    def _summary(scenario: Scenario) -> str:
        lines = [f"Scenario: {scenario.name}"]
        if scenario.description:
            lines.append(f"  {scenario.description}")
        if scenario.field is not None:
            lines.append(f"Field: {scenario.field.name} {scenario.field.params or ''}".rstrip())
        lines.append(f"Action: {scenario.action.variant}"
                     + (f" ({scenario.action.hamiltonian.kind})" if scenario.action.hamiltonian else ""))
        for mid, m in zip(scenario.manifold_ids(), scenario.manifolds):
            lines.append(f"Manifold {mid}: {m.kind}")
        if scenario.problem is not None:
            p = scenario.problem
            lines.append(f"Problem: {p.start.kind.value} -> {p.end.kind.value}, {p.nodes} nodes")
        if scenario.criteria is not None and scenario.criteria.grid is not None:
            lines.append(f"Criteria grid: {scenario.criteria.grid.counts}")
        if scenario.verify is not None:
            lines.append("Suites: " + ", ".join(s.name for s in scenario.verify.suites))
        lines.append(f"Seed: {scenario.run.seed}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def export_to_file(scenario: Scenario, path: Union[str, Path],
                       fmt: ExportFormat = ExportFormat.JSON) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(ScenarioExporter.export(scenario, fmt), encoding='utf-8')
        return path
