"""
validator.py

Cross-section checks of scenarios.

The models check each section on its own; the validator checks that the
sections fit together: one state dimension throughout, known registry
names, references between sections that resolve, and solver sizes.
"""

import dataclasses
from dataclasses import dataclass
from typing import List

import numpy as np

from src.qpactions import available_variants
from src.qpcore import ConfigError
from src.qpcriteria import CriteriaOptions
from src.qpfields import available_fields
from src.qpmanifolds import available_manifolds
from src.qpminimize import MIN_NODES
from src.qpverify import available_suites

from .models import EndpointKind, Scenario

FIELD_VARIANTS = ('sde_randers', 'sde_general')
OPTION_NAMES = frozenset(f.name for f in dataclasses.fields(CriteriaOptions))


@dataclass
class ValidationResult:
    """
    Result of scenario validation

    Attributes:
        valid: Whether the scenario is usable
        errors: Problems that make it unusable
        warnings: Oddities worth reporting
    """
    valid: bool
    errors: List[str]
    warnings: List[str]

    def __bool__(self) -> bool:
        return self.valid


class ScenarioValidator:
    """Checks that scenario sections agree with each other"""

    @classmethod
    def validate(cls, scenario: Scenario) -> ValidationResult:
        errors: List[str] = []
        warnings: List[str] = []

        errors.extend(cls._check_dimensions(scenario))
        errors.extend(cls._check_names(scenario))

        ids = scenario.manifold_ids()
        if len(set(ids)) != len(ids):
            errors.append(f"Duplicate manifold ids: {ids}")

        if scenario.field is None and scenario.action.variant in FIELD_VARIANTS:
            errors.append(f"Action '{scenario.action.variant}' needs a field section")
        if scenario.action.variant == 'hamiltonian' and scenario.action.hamiltonian is None:
            errors.append("Action 'hamiltonian' needs a hamiltonian section")

        if scenario.problem is not None:
            errors.extend(cls._check_problem(scenario, ids))
        if scenario.criteria is not None:
            unknown = sorted(set(scenario.criteria.options) - OPTION_NAMES)
            if unknown:
                errors.append(f"Unknown criteria options: {unknown}")
            if scenario.criteria.grid is None and not scenario.criteria.points:
                warnings.append("Criteria section has neither grid nor points")
        if scenario.verify is not None:
            errors.extend(cls._check_suites(scenario, ids))
            if not scenario.verify.suites:
                warnings.append("Verify section lists no suites")

        if scenario.problem is None and scenario.criteria is None and scenario.verify is None:
            warnings.append("Scenario defines no problem, criteria or verify section")

        return ValidationResult(valid=not errors, errors=errors, warnings=warnings)

    @staticmethod
    def _check_dimensions(scenario: Scenario) -> List[str]:
        dims = {}
        if scenario.dim is not None:
            dims['dim'] = scenario.dim
        if scenario.run.box is not None:
            dims['run.box'] = scenario.run.box.dim
        p = scenario.problem
        if p is not None:
            for name, end in (('start', p.start), ('end', p.end)):
                if end.dim is not None:
                    dims[f"problem.{name}"] = end.dim
            if p.box is not None:
                dims['problem.box'] = p.box.dim
            if p.winding_center is not None:
                dims['problem.winding_center'] = len(p.winding_center)
        c = scenario.criteria
        errors = []
        if c is not None:
            if c.grid is not None:
                dims['criteria.grid'] = c.grid.box.dim
                if len(c.grid.counts) != c.grid.box.dim:
                    errors.append(f"Grid counts {c.grid.counts} do not match its box dimension {c.grid.box.dim}")
            if c.search_box is not None:
                dims['criteria.search_box'] = c.search_box.dim
            for k, x in enumerate(c.points):
                dims[f"criteria.points[{k}]"] = len(x)
            for k, x in enumerate(c.cycle_seeds):
                dims[f"criteria.cycle_seeds[{k}]"] = len(x)
        for k, m in enumerate(scenario.manifolds):
            for key in ('center', 'normal'):
                if key in m.params and isinstance(m.params[key], (list, tuple)):
                    dims[f"manifolds[{k}].{key}"] = len(m.params[key])
        if len(set(dims.values())) > 1:
            errors.append("Dimension mismatch: " + ", ".join(f"{k}={v}" for k, v in dims.items()))
        return errors

    @staticmethod
    def _check_names(scenario: Scenario) -> List[str]:
        errors = []
        if scenario.field is not None and scenario.field.name not in available_fields():
            errors.append(f"Unknown field '{scenario.field.name}'")
        if scenario.action.variant not in available_variants():
            errors.append(f"Unknown action variant '{scenario.action.variant}'")
        for m in scenario.manifolds:
            if m.kind not in available_manifolds():
                errors.append(f"Unknown manifold kind '{m.kind}'")
        return errors

    @staticmethod
    def _check_problem(scenario: Scenario, ids: List[str]) -> List[str]:
        p = scenario.problem
        errors = []
        if p.nodes < MIN_NODES:
            errors.append(f"problem.nodes must be >= {MIN_NODES}, got {p.nodes}")
        for name, end in (('start', p.start), ('end', p.end)):
            if end.kind == EndpointKind.LEVEL_SET and end.manifold not in ids:
                errors.append(f"problem.{name} names unknown manifold '{end.manifold}'")
        if (p.start.kind == EndpointKind.POINT and p.end.kind == EndpointKind.POINT
                and len(p.start.point) == len(p.end.point)
                and np.allclose(p.start.point, p.end.point)):
            errors.append("Start and end points coincide")
        return errors

    @staticmethod
    def _check_suites(scenario: Scenario, ids: List[str]) -> List[str]:
        errors = []
        known = available_suites()
        for suite in scenario.verify.suites:
            if suite.name not in known:
                errors.append(f"Unknown suite '{suite.name}'")
            elif suite.name == 'hitting_report' and scenario.problem is None:
                errors.append("Suite 'hitting_report' needs a problem section")
            elif suite.name == 'key_estimate' and suite.params.get('manifold') not in ids:
                errors.append(f"Suite 'key_estimate' names unknown manifold '{suite.params.get('manifold')}'")
            elif suite.name == 'admissibility':
                named = list(suite.params.get('expect_pass', [])) + list(suite.params.get('expect_fail', []))
                missing = sorted(set(named) - set(ids))
                if missing:
                    errors.append(f"Suite 'admissibility' names unknown manifolds {missing}")
        return errors

    @classmethod
    def validate_and_raise(cls, scenario: Scenario) -> ValidationResult:
        """
        Raises:
            ConfigError: Scenario is invalid
        """
        result = cls.validate(scenario)
        if not result.valid:
            raise ConfigError("Scenario validation failed:\n" + "\n".join(f"  - {e}" for e in result.errors))
        return result
