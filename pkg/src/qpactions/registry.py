"""
registry.py

Build local actions and Hamiltonians from configuration dictionaries.

Actions are keyed by variant name. Matrices are given row-major, jump
models by rate-function names from RATE_FUNCTIONS plus jump vectors and
Agmon potentials by a name from POTENTIAL_FUNCTIONS:

    {'variant': 'hamiltonian',
     'hamiltonian': {'kind': 'markov_jump',
                     'rates': [{'name': 'constant', 'params': {'value': 1.0}},
                               {'name': 'linear', 'params': {'coeff': 1.0}}],
                     'jumps': [[1.0], [-1.0]]}}
"""

import logging
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from src.qpcore import Box, ConfigError
from src.qpfields import FlowField

from .hamiltonians import (
    Hamiltonian,
    agmon_hamiltonian,
    birth_death_hamiltonian,
    check_hamiltonian,
    markov_jump_hamiltonian,
    rate_function,
    riemannian_hamiltonian,
    sde_hamiltonian,
)
from .local import (
    ActionVariant,
    LocalAction,
    agmon_action,
    from_hamiltonian,
    riemannian_action,
    sde_general_action,
    sde_randers_action,
)

logger = logging.getLogger(__name__)


def _u_constant(value: float = 0.5, field: Optional[FlowField] = None):
    if value < 0.0:
        raise ConfigError(f"Constant potential must be nonnegative, got {value}")
    return lambda X: np.full(X.shape[0], float(value))


def _u_quadratic(center=(0.0, 0.0), stiffness: float = 1.0, field: Optional[FlowField] = None):
    c = np.asarray(center, dtype=float)
    return lambda X: 0.5 * float(stiffness) * np.sum((X - c) ** 2, axis=1)


def _u_gradient_norm(field: Optional[FlowField] = None):
    if field is None:
        raise ConfigError("Potential 'gradient_norm' needs a field")
    return lambda X: 0.5 * np.sum(field.b_batch(X) ** 2, axis=1)


# name -> constructor(**params, field=...) -> batched U
POTENTIAL_FUNCTIONS: Dict[str, Callable[..., Callable[[np.ndarray], np.ndarray]]] = {
    'constant': _u_constant,
    'quadratic': _u_quadratic,
    'gradient_norm': _u_gradient_norm,
}


def build_potential(spec: Dict[str, Any], field: Optional[FlowField] = None):
    """Batched U from {'kind': name, 'params': {...}}"""
    kind = spec.get('kind')
    if kind not in POTENTIAL_FUNCTIONS:
        raise ConfigError(f"Unknown potential '{kind}'; available: {', '.join(sorted(POTENTIAL_FUNCTIONS))}")
    try:
        return POTENTIAL_FUNCTIONS[kind](**dict(spec.get('params') or {}), field=field)
    except TypeError as exc:
        raise ConfigError(f"Bad parameters for potential '{kind}': {exc}") from exc


def _require_dim(field: Optional[FlowField], dim: Optional[int]) -> int:
    if field is not None:
        return field.dim
    if dim is None:
        raise ConfigError("Dimension unknown: give a field or dim")
    return int(dim)


def build_hamiltonian(spec: Dict[str, Any], field: Optional[FlowField] = None,
                      dim: Optional[int] = None) -> Hamiltonian:
    """
    Hamiltonian from a configuration dictionary.

    Kinds: sde (uses the field, optional A), markov_jump (rates, jumps),
    birth_death (birth, death), riemannian (A), agmon (U).

    Raises:
        ConfigError: Unknown kind or inconsistent parameters
    """
    kind = spec.get('kind')
    params = dict(spec.get('params') or {})
    if kind == 'sde':
        if field is None:
            raise ConfigError("SDE Hamiltonian needs a field")
        return sde_hamiltonian(field, params.get('A'))
    if kind == 'markov_jump':
        rates: List[Any] = list(spec.get('rates') or params.get('rates') or [])
        jumps = spec.get('jumps') or params.get('jumps')
        if not rates or jumps is None:
            raise ConfigError("Markov-jump Hamiltonian needs rates and jumps")
        fns = [rate_function(r['name'], r.get('params')) for r in rates]
        return markov_jump_hamiltonian(fns, jumps, params={'rates': rates, 'jumps': jumps})
    if kind == 'birth_death':
        return birth_death_hamiltonian(**params)
    if kind == 'riemannian':
        return riemannian_hamiltonian(params.get('A'), _require_dim(field, dim))
    if kind == 'agmon':
        n = _require_dim(field, dim)
        return agmon_hamiltonian(build_potential(params.get('U') or {'kind': 'gradient_norm'}, field), n)
    raise ConfigError(f"Unknown Hamiltonian kind '{kind}'")


def available_variants() -> List[str]:
    return [v.value for v in ActionVariant]


def build_action(spec: Dict[str, Any], field: Optional[FlowField] = None, dim: Optional[int] = None,
                 check_box: Optional[Box] = None, skip_checks: bool = False,
                 seed: Optional[int] = None) -> LocalAction:
    """
    Local action from {'variant': name, ...}.

    Hamiltonian actions are checked on check_box (sign condition,
    convexity, derivative consistency) unless skip_checks is set.

    Raises:
        ConfigError: Unknown variant, missing data, or a failed Hamiltonian check
    """
    try:
        variant = ActionVariant(spec.get('variant'))
    except ValueError as exc:
        raise ConfigError(f"Unknown action variant '{spec.get('variant')}'; "
                          f"available: {', '.join(available_variants())}") from exc

    if variant in (ActionVariant.SDE_RANDERS, ActionVariant.SDE_GENERAL) and field is None:
        raise ConfigError(f"Action '{variant.value}' needs a field")

    if variant == ActionVariant.SDE_RANDERS:
        return sde_randers_action(field)
    if variant == ActionVariant.SDE_GENERAL:
        return sde_general_action(field, spec.get('A'))
    if variant == ActionVariant.RIEMANNIAN:
        return riemannian_action(spec.get('A'), _require_dim(field, dim))
    if variant == ActionVariant.AGMON:
        u_spec = spec.get('U') or {'kind': 'gradient_norm'}
        return agmon_action(build_potential(u_spec, field), _require_dim(field, dim), params={'U': u_spec})

    h_spec = spec.get('hamiltonian')
    if not h_spec:
        raise ConfigError("Action 'hamiltonian' needs a 'hamiltonian' section")
    h = build_hamiltonian(h_spec, field, dim)
    if check_box is not None and not skip_checks:
        report = check_hamiltonian(h, check_box, seed=seed)
        if not report.passed:
            raise ConfigError(f"Hamiltonian '{h.name}' failed structural checks: {report.to_dict()}")
    return from_hamiltonian(h, seed=seed)
