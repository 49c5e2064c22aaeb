"""
problem.py

Minimization problems and their results.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.qpactions import LocalAction
from src.qpcore import DEFAULT_SEED, Box, ConfigError, as_point
from src.qpcurves import ArcCurve, Curve

from .sets import EndpointSet, sets_disjoint

MIN_NODES = 16
STALL_WINDOW = 20
HISTORY_JITTER = 1e-12


@dataclass(frozen=True)
class MinimizeProblem:
    """
    Minimize S over curves from start_set to end_set inside a box

    Attributes:
        action: Local action
        start_set: A1
        end_set: A2
        nodes: Node count of the discretised curve (>= 16)
        box: Confinement box K; nodes are clamped into it
        max_iters: Iteration cap
        step0: First trial step of the backtracking line search
        tol_S: Relative action decrease over STALL_WINDOW iterations
            below which the run counts as converged
        max_halvings: Line-search halvings before the step is given up
        winding_center: Centre for the winding diagnostic (cycle targets)
        seed: Seed recorded in every report

    Raises:
        ConfigError: Fewer than 16 nodes, non-positive solver parameters,
            dimension mismatches or intersecting endpoint sets
    """
    action: LocalAction
    start_set: EndpointSet
    end_set: EndpointSet
    nodes: int = 200
    box: Optional[Box] = None
    max_iters: int = 2000
    step0: float = 1.0
    tol_S: float = 1e-7
    max_halvings: int = 40
    winding_center: Optional[Tuple[float, ...]] = None
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.nodes < MIN_NODES:
            raise ConfigError(f"nodes must be >= {MIN_NODES}, got {self.nodes}")
        if self.max_iters < 1 or self.step0 <= 0 or self.tol_S <= 0 or self.max_halvings < 1:
            raise ConfigError(
                f"max_iters, step0, tol_S and max_halvings must be positive: "
                f"{self.max_iters}, {self.step0}, {self.tol_S}, {self.max_halvings}"
            )
        dims = {self.action.dim, self.start_set.dim, self.end_set.dim}
        if self.box is not None:
            dims.add(self.box.dim)
        if len(dims) != 1:
            raise ConfigError(f"Action, endpoint sets and box disagree in dimension: {sorted(dims)}")
        if self.winding_center is not None:
            as_point(self.winding_center, self.action.dim)
        if not sets_disjoint(self.start_set, self.end_set):
            raise ConfigError("Start and end sets intersect")

    @property
    def dim(self) -> int:
        return self.action.dim

    @property
    def scale(self) -> float:
        """Box diagonal, or the distance between the set anchors without a box"""
        if self.box is not None:
            return self.box.scale
        a = self.start_set.representative()
        b = self.end_set.representative(toward=a)
        return max(float(np.linalg.norm(b - a)), 1.0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'action': self.action.name,
            'start_set': self.start_set.to_dict(),
            'end_set': self.end_set.to_dict(),
            'nodes': self.nodes,
            'box': None if self.box is None else self.box.to_dict(),
            'max_iters': self.max_iters,
            'step0': self.step0,
            'tol_S': self.tol_S,
            'max_halvings': self.max_halvings,
            'winding_center': None if self.winding_center is None else list(self.winding_center),
            'seed': self.seed,
        }


@dataclass
class MinimizeResult:
    """
    Outcome of minimize

    Attributes:
        curve: Final curve, arclength parameterized
        action_value: S(curve)
        converged: True when the stall criterion stopped the run
        iterations: Accepted steps
        action_history: S after each accepted step, starting with the seed
        seed_action: S of the seed curve
        stop_reason: 'stalled', 'stationary' or 'max_iters'
        clamp_active: Whether box clamping moved any node in the last step
        clamp_count: Steps in which clamping was active
        raw_curve: Last accepted iterate before arclength redistribution
        winding_history: Winding numbers about winding_center per step
        nonexistence_suspected: Not converged while the winding kept growing
        parameters: Problem parameters (for reports)
    """
    curve: ArcCurve
    action_value: float
    converged: bool
    iterations: int
    action_history: List[float]
    seed_action: float
    stop_reason: str
    clamp_active: bool = False
    clamp_count: int = 0
    raw_curve: Optional[Curve] = None
    winding_history: List[float] = field(default_factory=list)
    nonexistence_suspected: bool = False
    parameters: Dict[str, Any] = field(default_factory=dict)

    @property
    def monotone(self) -> bool:
        h = self.action_history
        return all(b <= a + HISTORY_JITTER for a, b in zip(h, h[1:]))

    def to_dict(self) -> Dict[str, Any]:
        """Sidecar document (the nodes go to the curve CSV)"""
        return {
            'action': self.action_value,
            'seed_action': self.seed_action,
            'iterations': self.iterations,
            'converged': self.converged,
            'stop_reason': self.stop_reason,
            'nodes': len(self.curve),
            'start': self.curve.start.tolist(),
            'end': self.curve.end.tolist(),
            'action_history': list(self.action_history),
            'clamp_active': self.clamp_active,
            'clamp_count': self.clamp_count,
            'winding_history': list(self.winding_history),
            'nonexistence_suspected': self.nonexistence_suspected,
            'seed': self.parameters.get('seed'),
            'parameters': dict(self.parameters),
        }
