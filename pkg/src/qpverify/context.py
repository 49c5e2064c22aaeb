"""
context.py

What the verification suites read: the scenario's runtime objects plus
lazily computed, cached results shared between suites (the minimizer and
the equilibria).
"""

import logging
import dataclasses
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

from src.qpactions import LocalAction
from src.qpcore import DEFAULT_SEED, Box, ConfigError, PreconditionError
from src.qpfields import Equilibrium, FlowField, find_equilibria
from src.qpmanifolds import AdmissibleManifold
from src.qpminimize import MinimizeProblem, MinimizeResult, minimize

logger = logging.getLogger(__name__)


@dataclass
class VerifyContext:
    """
    Runtime objects of one scenario

    Attributes:
        action: Local action
        field: Drift (defaults to the action's drift)
        manifolds: Candidate manifolds, as configured (not yet checked)
        problem: Minimization problem, when the scenario defines one
        box: Scenario box (sampling region of the suites)
        seed: Seed handed to every sampling suite
        threads: Worker count for data-parallel parts
    """
    action: LocalAction
    field: Optional[FlowField] = None
    manifolds: Sequence[AdmissibleManifold] = ()
    problem: Optional[MinimizeProblem] = None
    box: Optional[Box] = None
    seed: int = DEFAULT_SEED
    threads: Optional[int] = None
    _cache: Dict[str, Any] = dataclasses.field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.field is None:
            self.field = self.action.drift

    @property
    def dim(self) -> int:
        return self.action.dim

    def require_field(self) -> FlowField:
        if self.field is None:
            raise PreconditionError(f"Action '{self.action.name}' has no drift field")
        return self.field

    def require_box(self, bounds=None) -> Box:
        """Box from explicit bounds, else the scenario box"""
        if bounds is not None:
            return bounds if isinstance(bounds, Box) else Box.from_bounds(*bounds)
        if self.box is None:
            raise ConfigError("No box given and the scenario defines none")
        return self.box

    def require_problem(self) -> MinimizeProblem:
        if self.problem is None:
            raise ConfigError("The scenario defines no minimization problem")
        return self.problem

    def manifold(self, manifold_id: str) -> AdmissibleManifold:
        for m in self.manifolds:
            if m.id == manifold_id:
                return m
        raise ConfigError(f"Unknown manifold '{manifold_id}'; known: {[m.id for m in self.manifolds]}")

    def minimized(self) -> MinimizeResult:
        """Minimizer of the scenario problem, computed once"""
        if 'minimized' not in self._cache:
            self._cache['minimized'] = minimize(self.require_problem(), f=self.field, threads=self.threads)
        return self._cache['minimized']

    def equilibria(self, box: Optional[Box] = None) -> List[Equilibrium]:
        """Equilibria of the drift in box (default: the scenario box), computed once per box"""
        box = box or self.require_box()
        key = ('equilibria', tuple(box.lo.tolist()), tuple(box.hi.tolist()))
        if key not in self._cache:
            self._cache[key] = find_equilibria(self.require_field(), box)
        return self._cache[key]
