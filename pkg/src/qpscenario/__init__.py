"""
QPScenario: scenario files

Layer 9 of the quasipath stack. Parses YAML or JSON scenario files into
pydantic models, checks that their sections agree, and builds the field,
action, manifolds, minimization problem, criteria context and
verification context they describe.
"""

from .models import (
    BoxSection,
    FieldSection,
    HamiltonianSection,
    ActionSection,
    ManifoldSection,
    EndpointKind,
    EndpointSection,
    ProblemSection,
    GridSection,
    CriteriaSection,
    SuiteSection,
    VerifySection,
    RunSection,
    Scenario,
)
from .validator import ValidationResult, ScenarioValidator
from .loader import ScenarioLoader, load_scenario
from .builders import (
    ScenarioRuntime,
    build_runtime,
    build_endpoint,
    build_problem,
    build_initial_curve,
    build_criteria_options,
    build_criteria_context,
    criteria_points,
    build_verify_context,
    build_runner_config,
)
from .export import ExportFormat, ScenarioExporter

__all__ = [
    'BoxSection',
    'FieldSection',
    'HamiltonianSection',
    'ActionSection',
    'ManifoldSection',
    'EndpointKind',
    'EndpointSection',
    'ProblemSection',
    'GridSection',
    'CriteriaSection',
    'SuiteSection',
    'VerifySection',
    'RunSection',
    'Scenario',
    'ValidationResult',
    'ScenarioValidator',
    'ScenarioLoader',
    'load_scenario',
    'ScenarioRuntime',
    'build_runtime',
    'build_endpoint',
    'build_problem',
    'build_initial_curve',
    'build_criteria_options',
    'build_criteria_context',
    'criteria_points',
    'build_verify_context',
    'build_runner_config',
    'ExportFormat',
    'ScenarioExporter',
]

__version__ = '0.1.0'
__layer__ = 9
