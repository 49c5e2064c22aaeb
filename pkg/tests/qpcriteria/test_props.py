"""
test_props.py

Tests for the pointwise criteria and the Hoelder regression.
"""

import numpy as np
import pytest

from src.qpactions import (
    agmon_action,
    agmon_hamiltonian,
    from_hamiltonian,
    riemannian_action,
    riemannian_hamiltonian,
    sde_hamiltonian,
    sde_randers_action,
)
from src.qpcore import Box, ConfigError, PreconditionError
from src.qpfields import FlowField, double_well, flow, limit_cycle, make_equilibrium
from src.qpmanifolds import admissible, level_of_potential, sphere
from src.qpcriteria import (
    HOLDER_ASSUMPTION,
    CriteriaOptions,
    Criterion,
    Verdict,
    check_holder,
    check_local_root,
    check_prop0,
    check_prop1,
    check_prop2,
    holder_fit,
    saddle_coverage,
)

OUTER_BOX = Box.from_bounds([-3.0, -3.5], [3.0, 3.5])


def quadratic(X):
    return 0.5 * np.sum(np.asarray(X) ** 2, axis=1)


@pytest.fixture(scope='module')
def well():
    return double_well()


@pytest.fixture(scope='module')
def well_manifolds(well):
    """Small circles around both wells and the outer level set V = 5"""
    return [admissible(sphere([-1.0, 0.0], 0.1, 'left'), well),
            admissible(sphere([1.0, 0.0], 0.1, 'right'), well),
            admissible(level_of_potential(well, 5.0, OUTER_BOX, 'outer'), well)]


class TestProp0:
    """Tests for check_prop0"""

    def test_riemannian(self):
        """|y|_I = 1 on unit directions"""
        v = check_prop0(riemannian_action(), [0.3, -2.0])
        assert v.verdict == Verdict.STRONG
        assert v.criterion == Criterion.PROP0
        assert v.margin == pytest.approx(1.0)

    def test_agmon(self):
        """Positive U gives a strong verdict, a root of U none"""
        a = agmon_action(quadratic, 2)
        assert check_prop0(a, [1.0, 0.0]).margin == pytest.approx(1.0)
        assert check_prop0(a, [0.0, 0.0]) is None

    def test_sde_degenerate_direction(self, well):
        """l vanishes along b(x)"""
        assert check_prop0(sde_randers_action(well), [0.5, 0.2]) is None

    def test_hamiltonian_variant(self, well):
        """H(x, 0) = -1 for the Riemannian Hamiltonian, 0 for the SDE one"""
        v = check_prop0(from_hamiltonian(riemannian_hamiltonian()), [0.0, 0.0])
        assert v.margin == pytest.approx(1.0)
        assert v.evidence['H0'] == pytest.approx(-1.0)
        assert check_prop0(from_hamiltonian(sde_hamiltonian(well)), [0.5, 0.2]) is None

    def test_too_few_directions(self):
        """At least eight directions"""
        with pytest.raises(PreconditionError):
            check_prop0(riemannian_action(), [0.0, 0.0], directions=4)


class TestProp1:
    """Tests for check_prop1"""

    def test_basin_point(self, well, well_manifolds):
        """(0.5, 0.2) flows into the circle around (1, 0)"""
        v = check_prop1(well, well_manifolds, [0.5, 0.2])
        assert v.verdict == Verdict.STRONG
        assert v.criterion == Criterion.PROP1
        assert v.evidence['manifold_id'] == 'right'
        assert v.evidence['level_residual'] < 1e-8
        assert v.evidence['crossing_time'] < 0.0

    def test_foot_point(self, well, well_manifolds):
        """psi(x, -t) is the recorded foot point on M"""
        x = np.array([0.5, 0.2])
        v = check_prop1(well, well_manifolds, x)
        foot = flow(well, x, -v.evidence['crossing_time'])
        np.testing.assert_allclose(foot, v.evidence['foot_point'], atol=1e-7)
        assert abs(well_manifolds[1].value(foot)) < 1e-6

    def test_separatrix_point(self, well, well_manifolds):
        """Points on the stable manifold of the saddle reach the outer level set backwards"""
        v = check_prop1(well, well_manifolds, [0.0, 1.0])
        assert v.evidence['manifold_id'] == 'outer'
        assert v.evidence['crossing_time'] > 0.0

    def test_saddle(self, well, well_manifolds):
        """b(x) = 0 gives no verdict"""
        assert check_prop1(well, well_manifolds, [0.0, 0.0]) is None

    def test_limit_cycle(self):
        """A point on the cycle never reaches the inner or outer circle"""
        f = limit_cycle()
        manifolds = [admissible(sphere([0.0, 0.0], 0.5), f), admissible(sphere([0.0, 0.0], 2.0), f)]
        assert check_prop1(f, manifolds, [1.0, 0.0], t_max=5.0) is None

    def test_no_manifolds(self, well):
        """An empty list never crosses"""
        assert check_prop1(well, [], [0.5, 0.2]) is None


class TestProp2:
    """Tests for check_prop2"""

    def test_attractor(self, well):
        """Linear decay of b near (-1, 0) fits delta = 1"""
        eq = make_equilibrium(well, [-1.0, 0.0])
        v = check_prop2(well, sde_randers_action(well), eq, [])
        assert v.verdict == Verdict.STRONG
        assert v.criterion == Criterion.PROP2_ATTRACTOR
        assert v.margin == pytest.approx(1.0, abs=0.1)
        assert v.evidence['e_condition'] is True
        assert v.evidence['holder_data']['holds'] is True
        assert v.evidence['holder_data']['assumption'] == HOLDER_ASSUMPTION

    def test_undeclared_e_condition(self, well):
        """Without the state-constraint declaration the verdict stays weak"""
        eq = make_equilibrium(well, [1.0, 0.0])
        v = check_prop2(well, sde_randers_action(well), eq, [], CriteriaOptions(e_condition=False))
        assert v.verdict == Verdict.WEAK

    def test_flat_action_is_weak(self, well):
        """l = |y| does not vanish at the equilibrium"""
        eq = make_equilibrium(well, [1.0, 0.0])
        v = check_prop2(well, riemannian_action(), eq, [])
        assert v.verdict == Verdict.WEAK
        assert not v.evidence['holder']['passed']

    def test_saddle(self, well, well_manifolds):
        """Both wells and the outer level set catch the four branches"""
        eq = make_equilibrium(well, [0.0, 0.0])
        v = check_prop2(well, sde_randers_action(well), eq, well_manifolds)
        assert v.verdict == Verdict.STRONG
        assert v.criterion == Criterion.PROP2_SADDLE
        branches = v.evidence['coverage']['branches']
        assert branches['stable_plus'] == branches['stable_minus'] == 'outer'
        assert {branches['unstable_plus'], branches['unstable_minus']} == {'left', 'right'}

    def test_saddle_without_manifolds(self, well):
        """Coverage fails vacuously"""
        eq = make_equilibrium(well, [0.0, 0.0])
        assert check_prop2(well, sde_randers_action(well), eq, []) is None
        assert not saddle_coverage(well, eq, []).covered

    def test_degenerate(self):
        """A zero eigenvalue gives no verdict"""
        f = FlowField(2, lambda X: np.stack([-X[:, 0] ** 3, -X[:, 1]], axis=-1), None, name='cubic')
        eq = make_equilibrium(f, [0.0, 0.0])
        assert check_prop2(f, sde_randers_action(f), eq, []) is None

    def test_saddle_beyond_planar(self):
        """Saddles in dim 3 are left open"""
        f = FlowField(3, lambda X: X * np.array([-1.0, -1.0, 1.0]), None, name='linear3')
        eq = make_equilibrium(f, [0.0, 0.0, 0.0])
        assert check_prop2(f, sde_randers_action(f), eq, []) is None


class TestHolder:
    """Tests for holder_fit and check_holder"""

    def test_sde_slope(self, well):
        """sup l = 2 |b| grows linearly from the attractor"""
        fit = holder_fit(sde_randers_action(well), [1.0, 0.0])
        assert fit.passed
        assert fit.slope == pytest.approx(1.0, abs=0.1)
        assert fit.r2 >= 0.99
        assert len(fit.radii) == 8
        assert fit.radii[0] == pytest.approx(1e-4)
        assert fit.radii[-1] == pytest.approx(1e-1)

    def test_agmon_slope(self):
        """sqrt(2 U) = |x| at the root of a quadratic potential"""
        fit = holder_fit(agmon_action(quadratic, 2), [0.0, 0.0])
        assert fit.passed
        assert fit.slope == pytest.approx(1.0, abs=1e-6)

    def test_flat(self):
        """Constant l has slope 0"""
        assert not holder_fit(riemannian_action(), [0.0, 0.0]).passed

    def test_bad_radii(self, well):
        """Two radii at least"""
        with pytest.raises(ConfigError):
            holder_fit(sde_randers_action(well), [1.0, 0.0], radii=1)

    def test_check_holder(self, well):
        """True exactly at critical points"""
        h = sde_hamiltonian(well)
        assert check_holder(h, [1.0, 0.0])
        assert not check_holder(h, [0.5, 0.2])
        assert check_holder(agmon_hamiltonian(quadratic, 2), [0.0, 0.0])

    def test_check_holder_records_assumption(self, well):
        """The result carries its margin and the Hoelder data assumption"""
        check = check_holder(sde_hamiltonian(well), [0.5, 0.2])
        assert check.holds is False
        assert check.critical_margin > check.tol
        doc = check.to_dict()
        assert doc['assumption'] == HOLDER_ASSUMPTION
        assert set(doc) == {'holds', 'critical_margin', 'tol', 'assumption'}


class TestLocalRoot:
    """Tests for check_local_root"""

    def test_quadratic_root(self):
        """The root of U is a repellor of the borrowed drift"""
        v = check_local_root(agmon_action(quadratic, 2), [0.0, 0.0])
        assert v.verdict == Verdict.STRONG
        assert v.criterion == Criterion.PROP2_REPELLOR
        assert 0.0 < v.evidence['A_const'] <= 0.5
        assert v.evidence['drift_bound']['passed']
        assert v.evidence['equilibrium']['kind'] == 'repellor'
        assert v.evidence['holder_data']['holds'] is True
        assert v.evidence['holder_data']['assumption'] == HOLDER_ASSUMPTION

    def test_not_a_root(self):
        """Points with U > 0 are left to prop0"""
        assert check_local_root(agmon_action(quadratic, 2), [1.0, 0.0]) is None

    def test_drift_actions_skip(self, well):
        """Actions with H(x, 0) = 0 use their own drift"""
        assert check_local_root(sde_randers_action(well), [1.0, 0.0]) is None
