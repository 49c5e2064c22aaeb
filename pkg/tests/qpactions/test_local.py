"""
test_local.py

Tests for local-action variants, their axioms and the action registry.
"""

import numpy as np
import pytest

from src.qpactions import (
    ActionVariant,
    agmon_action,
    available_variants,
    birth_death_hamiltonian,
    build_action,
    build_hamiltonian,
    check_local_action,
    eval_local_action,
    from_hamiltonian,
    h0_plus,
    hamiltonian_local_action,
    local_drift_near_root,
    riemannian_action,
    sde_general_action,
    sde_hamiltonian,
    sde_randers_action,
)
from src.qpcore import Box, ConfigError, DomainError, MetricError, make_rng
from src.qpfields import constant, double_well

SQUARE = Box.from_bounds([-1.5, -1.5], [1.5, 1.5])
POPULATION = Box.from_bounds([0.2], [3.0])


@pytest.fixture
def randers():
    return sde_randers_action(constant([1.0, 0.0]))


class TestClosedForms:
    """Tests for the closed-form variants"""

    def test_randers_examples(self, randers):
        """With, against and across the drift"""
        assert eval_local_action(randers, [0.0, 0.0], [1.0, 0.0]) == 0.0
        assert eval_local_action(randers, [0.0, 0.0], [-1.0, 0.0]) == pytest.approx(2.0)
        assert eval_local_action(randers, [0.0, 0.0], [0.0, 1.0]) == pytest.approx(1.0)

    def test_zero_direction(self, randers):
        """l(x, 0) = 0"""
        assert randers([0.3, 0.3], [0.0, 0.0]) == 0.0

    def test_agmon_unit(self):
        """U = 1/2 and |y| = 1 give 1"""
        a = agmon_action(lambda X: np.full(X.shape[0], 0.5), 2)
        assert a([0.4, -0.1], [0.6, 0.8]) == pytest.approx(1.0)

    def test_agmon_negative_potential(self):
        """U < 0 is a domain error"""
        a = agmon_action(lambda X: -X[:, 0], 2)
        with pytest.raises(DomainError):
            a([1.0, 0.0], [1.0, 0.0])

    def test_riemannian_identity(self):
        """A = I gives the Euclidean norm"""
        assert riemannian_action()([0.0, 0.0], [3.0, 4.0]) == pytest.approx(5.0)

    def test_general_reduces_to_randers(self):
        """A = I reproduces the Randers form, A = 2I halves it"""
        f = double_well()
        rng = make_rng(3)
        X, Y = rng.uniform(-1, 1, (20, 2)), rng.standard_normal((20, 2))
        base = sde_randers_action(f).evaluate_batch(X, Y)
        np.testing.assert_allclose(sde_general_action(f, None).evaluate_batch(X, Y), base, atol=1e-14)
        np.testing.assert_allclose(sde_general_action(f, 2.0 * np.eye(2)).evaluate_batch(X, Y),
                                   0.5 * base, atol=1e-14)

    def test_indefinite_metric(self):
        """Constant indefinite matrices are rejected at construction"""
        with pytest.raises(MetricError):
            riemannian_action([[1.0, 2.0], [2.0, 1.0]])

    def test_indefinite_metric_field(self):
        """Point-dependent matrices are checked at evaluation"""
        a = riemannian_action(lambda x: [[1.0, 0.0], [0.0, x[0]]])
        assert a([1.0, 0.0], [0.0, 1.0]) == pytest.approx(1.0)
        with pytest.raises(MetricError):
            a([-1.0, 0.0], [0.0, 1.0])


class TestHamiltonianAction:
    """Tests for the Hamiltonian-induced variant"""

    def test_matches_randers(self):
        """SDE Hamiltonian action equals the Randers form on random samples"""
        f = double_well()
        rng = make_rng(11)
        X, Y = rng.uniform(-2, 2, (1000, 2)), rng.standard_normal((1000, 2))
        closed = sde_randers_action(f).evaluate_batch(X, Y)
        induced = from_hamiltonian(sde_hamiltonian(f)).evaluate_batch(X, Y)
        assert np.max(np.abs(closed - induced)) < 1e-8

    def test_single_point(self):
        """b = (1, 0), y = (0, 1) gives 1"""
        h = sde_hamiltonian(constant([1.0, 0.0]))
        assert hamiltonian_local_action(h, [0.0, 0.0], [0.0, 1.0]) == pytest.approx(1.0)
        assert hamiltonian_local_action(h, [0.0, 0.0], [0.0, 0.0]) == 0.0

    def test_drift_direction_is_free(self):
        """y = c H_theta(x, 0) costs nothing"""
        h = birth_death_hamiltonian()
        assert abs(hamiltonian_local_action(h, [2.0], [-0.5])) < 1e-10

    def test_natural_drift_attached(self):
        """Jump actions carry their natural drift"""
        a = from_hamiltonian(birth_death_hamiltonian())
        assert a.has_drift
        assert a.drift.b([2.5])[0] == pytest.approx(-1.5)


class TestAxioms:
    """Tests for check_local_action on every variant"""

    @pytest.mark.parametrize('action, box', [
        (sde_randers_action(double_well()), SQUARE),
        (sde_general_action(double_well(), [[2.0, 0.5], [0.5, 1.0]]), SQUARE),
        (riemannian_action([[1.0, 0.2], [0.2, 3.0]]), SQUARE),
        (agmon_action(lambda X: 0.5 * np.sum(X * X, axis=1), 2), SQUARE),
        (from_hamiltonian(birth_death_hamiltonian()), POPULATION),
    ])
    def test_homogeneous_convex_nonnegative(self, action, box):
        """All variants pass the sampled axioms"""
        report = check_local_action(action, box, samples=300, seed=1)
        assert report.passed, report.to_dict()

    def test_zero_set_is_drift_ray(self):
        """Away from criticality l vanishes only along b"""
        f = double_well()
        a = sde_randers_action(f)
        x = np.array([0.5, 0.3])
        b = f.b(x)
        assert a(x, 2.0 * b) < 1e-12
        angle = 1e-3
        rot = np.array([[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]])
        assert a(x, rot @ b) > 0.0

    def test_h0_plus(self):
        """SDE and jump actions have H(x, 0) = 0; metric actions do not"""
        assert h0_plus(sde_randers_action(double_well()))
        assert h0_plus(from_hamiltonian(birth_death_hamiltonian()))
        assert not h0_plus(riemannian_action())
        assert not h0_plus(agmon_action(lambda X: np.ones(X.shape[0]), 2))


class TestLocalRepellor:
    """Tests for local_drift_near_root"""

    def test_profile(self):
        """Linear inside half the radius, zero outside the radius"""
        f = local_drift_near_root([1.0, 0.0], 0.2)
        np.testing.assert_allclose(f.b([1.05, 0.0]), [0.05, 0.0])
        np.testing.assert_array_equal(f.b([1.3, 0.0]), [0.0, 0.0])
        np.testing.assert_allclose(f.jacobian([1.0, 0.0]), np.eye(2), atol=1e-8)

    def test_bad_radius(self):
        """Radius must be positive"""
        with pytest.raises(ConfigError):
            local_drift_near_root([0.0], 0.0)


class TestRegistry:
    """Tests for build_action / build_hamiltonian"""

    def test_variants(self):
        """All variant names are available"""
        assert set(available_variants()) == {v.value for v in ActionVariant}

    def test_closed_forms(self):
        """Variants built from configuration evaluate like the constructors"""
        f = double_well()
        a = build_action({'variant': 'sde_randers'}, field=f)
        assert a([0.5, 0.0], [-1.0, 0.0]) == pytest.approx(0.75)
        r = build_action({'variant': 'riemannian', 'A': [[4.0, 0.0], [0.0, 1.0]]}, dim=2)
        assert r([0.0, 0.0], [1.0, 0.0]) == pytest.approx(2.0)
        g = build_action({'variant': 'agmon', 'U': {'kind': 'gradient_norm'}}, field=f)
        assert g([0.5, 0.0], [1.0, 0.0]) == pytest.approx(0.375)

    def test_markov_jump_spec(self):
        """Rate table plus jumps reproduces the birth-death model"""
        spec = {'variant': 'hamiltonian',
                'hamiltonian': {'kind': 'markov_jump',
                                'rates': [{'name': 'constant', 'params': {'value': 1.0}},
                                          {'name': 'linear', 'params': {'coeff': 1.0}}],
                                'jumps': [[1.0], [-1.0]]}}
        a = build_action(spec, dim=1, check_box=POPULATION)
        ref = from_hamiltonian(birth_death_hamiltonian())
        X = np.array([[0.5], [2.0], [2.5]])
        Y = np.array([[-1.0], [1.0], [0.3]])
        np.testing.assert_allclose(a.evaluate_batch(X, Y), ref.evaluate_batch(X, Y), atol=1e-10)

    def test_unknown_variant(self):
        """Unknown variant names are config errors"""
        with pytest.raises(ConfigError):
            build_action({'variant': 'finsler'}, field=double_well())

    def test_missing_field(self):
        """SDE variants need a field"""
        with pytest.raises(ConfigError):
            build_action({'variant': 'sde_randers'}, dim=2)

    def test_missing_hamiltonian(self):
        """Hamiltonian variant needs its section"""
        with pytest.raises(ConfigError):
            build_action({'variant': 'hamiltonian'}, dim=1)

    def test_failed_check(self):
        """An indefinite diffusion fails the construction check"""
        spec = {'variant': 'hamiltonian',
                'hamiltonian': {'kind': 'sde', 'params': {'A': lambda x: [[1.0, 0.0], [0.0, -1.0]]}}}
        with pytest.raises(ConfigError):
            build_action(spec, field=constant([1.0, 0.0]), check_box=SQUARE)
        a = build_action(spec, field=constant([1.0, 0.0]), check_box=SQUARE, skip_checks=True)
        assert a.variant == ActionVariant.HAMILTONIAN

    def test_unknown_hamiltonian(self):
        """Unknown Hamiltonian kinds are config errors"""
        with pytest.raises(ConfigError):
            build_hamiltonian({'kind': 'kramers'}, dim=1)
