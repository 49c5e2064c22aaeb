"""
models.py

Pydantic models of scenario files.

Every section forbids unknown keys. The models only check the shape of a
scenario; cross-section checks live in validator.py and the runtime
objects are made in builders.py.
"""

from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.qpcore import DEFAULT_SEED, Box


class Section(BaseModel):
    """Base of every scenario section"""
    model_config = ConfigDict(extra='forbid')


class BoxSection(Section):
    """Axis-aligned box"""
    lower: List[float] = Field(min_length=1)
    upper: List[float] = Field(min_length=1)

    @model_validator(mode='after')
    def _corners(self) -> 'BoxSection':
        if len(self.lower) != len(self.upper):
            raise ValueError(f"lower and upper differ in length: {len(self.lower)} vs {len(self.upper)}")
        if any(lo >= hi for lo, hi in zip(self.lower, self.upper)):
            raise ValueError(f"empty box: lower {self.lower}, upper {self.upper}")
        return self

    @property
    def dim(self) -> int:
        return len(self.lower)

    def to_box(self) -> Box:
        return Box.from_bounds(self.lower, self.upper)


class FieldSection(Section):
    """Built-in drift field"""
    name: str
    params: Dict[str, Any] = Field(default_factory=dict)


class HamiltonianSection(Section):
    """Hamiltonian of a 'hamiltonian' action"""
    kind: str
    params: Dict[str, Any] = Field(default_factory=dict)
    rates: Optional[List[Dict[str, Any]]] = None
    jumps: Optional[List[List[float]]] = None


class ActionSection(Section):
    """
    Local action

    `A` is the diffusion or metric matrix of sde_general and riemannian,
    `U` the potential spec of agmon.
    """
    variant: str
    hamiltonian: Optional[HamiltonianSection] = None
    A: Optional[List[List[float]]] = None
    U: Optional[Dict[str, Any]] = None
    skip_checks: bool = False

    def to_spec(self) -> Dict[str, Any]:
        return self.model_dump(exclude_none=True, exclude={'skip_checks'})


class ManifoldSection(Section):
    """Candidate admissible manifold"""
    id: Optional[str] = None
    kind: str
    params: Dict[str, Any] = Field(default_factory=dict)

    def to_spec(self) -> Dict[str, Any]:
        return self.model_dump(exclude_none=True)


class EndpointKind(str, Enum):
    POINT = 'point'
    SPHERE = 'sphere'
    LEVEL_SET = 'level_set'


class EndpointSection(Section):
    """Start or end set: a point, a sphere, or the zero set of a scenario manifold"""
    kind: EndpointKind = EndpointKind.POINT
    point: Optional[List[float]] = None
    center: Optional[List[float]] = None
    radius: Optional[float] = Field(default=None, gt=0)
    manifold: Optional[str] = None

    @model_validator(mode='after')
    def _fields_for_kind(self) -> 'EndpointSection':
        needed = {EndpointKind.POINT: ('point',), EndpointKind.SPHERE: ('center', 'radius'),
                  EndpointKind.LEVEL_SET: ('manifold',)}[self.kind]
        missing = [name for name in needed if getattr(self, name) is None]
        if missing:
            raise ValueError(f"{self.kind.value} endpoint needs {', '.join(missing)}")
        return self

    @property
    def dim(self) -> Optional[int]:
        if self.kind == EndpointKind.POINT:
            return len(self.point)
        if self.kind == EndpointKind.SPHERE:
            return len(self.center)
        return None


class ProblemSection(Section):
    """Minimization problem; `curve` names an optional seed curve CSV"""
    start: EndpointSection
    end: EndpointSection
    nodes: int = 200
    box: Optional[BoxSection] = None
    max_iters: int = Field(default=2000, ge=1)
    step0: float = Field(default=1.0, gt=0)
    tol_S: float = Field(default=1e-7, gt=0)
    max_halvings: int = Field(default=40, ge=1)
    winding_center: Optional[List[float]] = None
    curve: Optional[str] = None


class GridSection(Section):
    """Regular grid of classification points"""
    box: BoxSection
    counts: List[int] = Field(min_length=1)

    @field_validator('counts')
    @classmethod
    def _positive(cls, counts: List[int]) -> List[int]:
        if any(n < 1 for n in counts):
            raise ValueError(f"grid counts must be positive, got {counts}")
        return counts


class CriteriaSection(Section):
    """
    Existence-criteria classification

    `options` are forwarded to CriteriaOptions; `on_cycle` lists points
    expected to lie on a limit cycle and is checked by `criteria`.
    """
    grid: Optional[GridSection] = None
    points: List[List[float]] = Field(default_factory=list)
    search_box: Optional[BoxSection] = None
    cycle_seeds: List[List[float]] = Field(default_factory=list)
    admissibility_samples: int = Field(default=64, ge=1)
    options: Dict[str, Any] = Field(default_factory=dict)
    min_coverage: Optional[float] = Field(default=None, ge=0, le=1)


class SuiteSection(Section):
    """One property suite and its parameters"""
    name: str
    params: Dict[str, Any] = Field(default_factory=dict)


class VerifySection(Section):
    """Property suites run by `verify`"""
    suites: List[SuiteSection] = Field(default_factory=list)
    halt_on_critical: bool = False


class RunSection(Section):
    """Run-wide settings; CLI flags override them"""
    seed: int = Field(default=DEFAULT_SEED, ge=0)
    threads: Optional[int] = Field(default=None, ge=1)
    box: Optional[BoxSection] = None


class Scenario(Section):
    """
    A complete scenario file

    Attributes:
        name: Scenario name (used for output stems)
        description: Free text
        dim: State dimension, needed only when neither field nor box fix it
        field: Drift field (optional for Hamiltonian actions with a natural drift)
        action: Local action
        manifolds: Candidate admissible manifolds
        problem: Minimization problem
        criteria: Grid or point classification
        verify: Property suites
        run: Seed, threads and scenario box
    """
    name: str
    description: str = ''
    dim: Optional[int] = Field(default=None, ge=1)
    field: Optional[FieldSection] = None
    action: ActionSection
    manifolds: List[ManifoldSection] = Field(default_factory=list)
    problem: Optional[ProblemSection] = None
    criteria: Optional[CriteriaSection] = None
    verify: Optional[VerifySection] = None
    run: RunSection = Field(default_factory=RunSection)

    def manifold_ids(self) -> List[str]:
        return [m.id or f"{m.kind}-{k}" for k, m in enumerate(self.manifolds)]
