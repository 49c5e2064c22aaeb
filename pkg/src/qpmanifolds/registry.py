"""
registry.py

Build manifolds from configuration dictionaries:

    {'id': 'left', 'kind': 'stable_ball', 'params': {'center': [-1, 0], 'a': 0.1}}
    {'id': 'outer', 'kind': 'level_of_potential', 'params': {'c': 1.0, 'box': [[-2, -2], [2, 2]]}}
    {'kind': 'polynomial_level', 'params': {'terms': [[1, [2, 0]], [1, [0, 2]], [-1, [0, 0]]],
                                            'box': [[-2, -2], [2, 2]]}}

Primitives that depend on the drift (level_of_potential, stable_ball) take
the field of the scenario.
"""

import logging
from typing import Any, Dict, List, Optional, Sequence

from src.qpcore import Box, ConfigError, as_point
from src.qpfields import EquilibriumKind, FlowField, find_equilibria, nearest_equilibrium

from .manifold import AdmissibleManifold
from .primitives import PRIMITIVES, hyperplane, level_of_potential, polynomial_level, sphere, stable_ball

logger = logging.getLogger(__name__)

EQUILIBRIUM_SEARCH_FACTOR = 2.0


def available_manifolds() -> List[str]:
    return sorted(PRIMITIVES)


def _equilibrium_near(f: FlowField, center: Sequence[float], a: float):
    c = as_point(center, f.dim)
    eqs = find_equilibria(f, Box.around(c, EQUILIBRIUM_SEARCH_FACTOR * max(a, 1e-3)))
    eq = nearest_equilibrium(eqs, c, kinds=(EquilibriumKind.ATTRACTOR, EquilibriumKind.REPELLOR))
    if eq is None:
        raise ConfigError(f"No attractor or repellor of '{f.name}' near {c.tolist()}")
    return eq


def build_manifold(spec: Dict[str, Any], field: Optional[FlowField] = None,
                   index: int = 0) -> AdmissibleManifold:
    """
    Construct one manifold.

    Args:
        spec: {'kind', 'params', optional 'id'}
        field: Drift (needed by level_of_potential and stable_ball)
        index: Position in the scenario list, used for the default id

    Raises:
        ConfigError: Unknown kind, bad parameters or missing field
    """
    kind = spec.get('kind')
    if kind not in PRIMITIVES:
        raise ConfigError(f"Unknown manifold '{kind}'; available: {', '.join(available_manifolds())}")
    params = dict(spec.get('params') or {})
    manifold_id = str(spec.get('id') or f"{kind}-{index}")
    if kind in ('level_of_potential', 'stable_ball') and field is None:
        raise ConfigError(f"Manifold '{kind}' needs a drift field")
    try:
        if kind == 'sphere':
            m = sphere(params['center'], float(params['radius']))
        elif kind == 'hyperplane':
            m = hyperplane(params['normal'], float(params.get('offset', 0.0)), params['box'])
        elif kind == 'polynomial_level':
            m = polynomial_level(params['terms'], params['box'], compact=bool(params.get('compact', True)))
        elif kind == 'level_of_potential':
            m = level_of_potential(field, float(params['c']), params['box'])
        else:
            a = float(params['a'])
            m = stable_ball(field, _equilibrium_near(field, params['center'], a), a)
    except ConfigError:
        raise
    except KeyError as exc:
        raise ConfigError(f"Manifold '{manifold_id}' ({kind}) is missing parameter {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"Bad parameters for manifold '{manifold_id}' ({kind}): {exc}") from exc
    logger.debug("build_manifold: %s (%s)", manifold_id, kind)
    return m.with_id(manifold_id)


def build_manifolds(specs: Sequence[Dict[str, Any]], field: Optional[FlowField] = None) -> List[AdmissibleManifold]:
    """Build every manifold of a scenario list; ids must be unique"""
    out = [build_manifold(spec, field, k) for k, spec in enumerate(specs)]
    ids = [m.id for m in out]
    if len(set(ids)) != len(ids):
        raise ConfigError(f"Duplicate manifold ids: {ids}")
    return out
