"""
test_admissible.py

Tests for manifold primitives, zero-set sampling, admissibility and the
sign invariant.
"""

import numpy as np
import pytest

from src.qpcore import Box, ConfigError, EmptyManifoldError, PreconditionError, make_rng
from src.qpfields import constant, double_well, limit_cycle, linear_radial, make_equilibrium
from src.qpmanifolds import (
    build_manifold,
    build_manifolds,
    check_admissible,
    check_sign_invariant,
    hyperplane,
    level_of_potential,
    orient_manifold,
    polynomial_level,
    sphere,
    stable_ball,
    zero_set_points,
)

UNIT = Box.from_bounds([-1, -1], [1, 1])
WELL_BOX = Box.from_bounds([-2, -1.5], [2, 1.5])


class TestPrimitives:
    """Tests for the built-in manifolds"""

    def test_sphere(self):
        """|x - c|^2 - r^2 with analytic gradient"""
        m = sphere([1.0, 0.0], 0.5)
        assert m.value([1.5, 0.0]) == pytest.approx(0.0)
        assert m.value([1.0, 0.0]) == pytest.approx(-0.25)
        np.testing.assert_allclose(m.gradient([1.5, 0.0]), [1.0, 0.0])
        assert m.bounding_box.contains([1.7, 0.0])

    def test_polynomial_matches_sphere(self):
        """The unit circle as a coefficient table"""
        poly = polynomial_level([[1, [2, 0]], [1, [0, 2]], [-1, [0, 0]]], UNIT.padded(0.5))
        circle = sphere([0.0, 0.0], 1.0)
        X = make_rng(1).uniform(-1, 1, (20, 2))
        np.testing.assert_allclose(poly.values(X), circle.values(X), atol=1e-14)
        np.testing.assert_allclose(poly.gradient([0.3, -0.2]), [0.6, -0.4])

    def test_potential_level_gradient_is_drift(self):
        """grad(-V + c) = b for a gradient field"""
        f = double_well()
        m = level_of_potential(f, 0.1, WELL_BOX)
        x = np.array([0.4, -0.3])
        np.testing.assert_allclose(m.gradient(x), f.b(x))

    def test_hyperplane_noncompact(self):
        """Hyperplanes carry compact=False"""
        m = hyperplane([1.0, 0.0], 0.25, UNIT)
        assert not m.compact
        assert m.value([0.75, 3.0]) == pytest.approx(0.5)

    def test_stable_ball_radial(self):
        """f_s(w) = |w| for b = -x, so {f_s = a} is the circle of radius a"""
        f = linear_radial()
        m = stable_ball(f, make_equilibrium(f, [0.0, 0.0]), 0.3)
        assert m.value([0.3, 0.0]) == pytest.approx(0.0, abs=1e-8)
        assert m.value([0.0, 0.1]) == pytest.approx(-0.2, abs=1e-8)

    def test_stable_ball_needs_attractor(self):
        """Saddles have no stable ball"""
        f = double_well()
        with pytest.raises(ConfigError):
            stable_ball(f, make_equilibrium(f, [0.0, 0.0]), 0.1)

    def test_bad_parameters(self):
        """Radius and normal are validated"""
        with pytest.raises(ConfigError):
            sphere([0.0, 0.0], 0.0)
        with pytest.raises(ConfigError):
            hyperplane([0.0, 0.0], 0.0, UNIT)

    def test_orientation_flip(self):
        """oriented(-1) negates values and gradients"""
        m = sphere([0.0, 0.0], 1.0).oriented(-1)
        assert m.value([0.0, 0.0]) == pytest.approx(1.0)
        np.testing.assert_allclose(m.gradient([0.5, 0.0]), [-1.0, 0.0])


class TestZeroSet:
    """Tests for zero_set_points"""

    def test_circle_points(self):
        """Every located point lies on the circle"""
        Z = zero_set_points(sphere([0.5, -0.5], 0.7), samples=32, seed=3)
        assert len(Z) >= 32
        np.testing.assert_allclose(np.linalg.norm(Z - [0.5, -0.5], axis=1), 0.7, atol=1e-12)

    def test_empty(self):
        """A plane outside its box has no sampled zero"""
        with pytest.raises(EmptyManifoldError):
            zero_set_points(hyperplane([1.0, 0.0], 5.0, UNIT), samples=16)

    def test_bad_samples(self):
        """At least one ray is required"""
        with pytest.raises(PreconditionError):
            zero_set_points(sphere([0.0, 0.0], 1.0), samples=0)


class TestCheckAdmissible:
    """Tests for check_admissible"""

    def test_potential_level(self):
        """-V + 0.1 around both wells of the double well is admissible"""
        report = check_admissible(level_of_potential(double_well(), 0.1, WELL_BOX), double_well())
        assert report.passed
        assert report.orientation == 1
        assert report.contained
        assert report.worst_margin > 0.0

    def test_radial_circle(self):
        """Inflow through |x| = 0.5 is admissible with orientation -1"""
        report = check_admissible(sphere([0.0, 0.0], 0.5), linear_radial())
        assert report.passed
        assert report.orientation == -1
        assert report.worst_margin == pytest.approx(1.0)

    def test_limit_cycle_loop_fails(self):
        """A loop crossing the limit cycle is crossed both ways"""
        report = check_admissible(sphere([1.0, 0.0], 0.5), limit_cycle())
        assert not report.passed
        assert report.orientation == 0
        assert report.flip_pair is not None
        assert report.failures

    def test_saddle_circle_fails(self):
        """Flow enters and leaves a circle around the saddle"""
        report = check_admissible(sphere([0.0, 0.0], 0.3), double_well())
        assert not report.passed
        assert report.flip_pair is not None

    def test_not_contained(self):
        """A compact-flagged level set that leaves its box fails containment"""
        m = polynomial_level([[1, [1, 0]]], UNIT)
        report = check_admissible(m, constant([1.0, 0.0]))
        assert report.orientation == 1
        assert not report.contained
        assert not report.passed

    def test_orient(self):
        """orient_manifold applies the orientation and rejects failures"""
        f = linear_radial()
        m = sphere([0.0, 0.0], 0.5)
        oriented = orient_manifold(m, check_admissible(m, f))
        assert oriented.value([0.0, 0.0]) > 0.0
        with pytest.raises(PreconditionError):
            orient_manifold(m, check_admissible(sphere([1.0, 0.0], 0.5), limit_cycle()))

    def test_report_dict(self):
        """Reports serialise their verdict and seed"""
        d = check_admissible(sphere([0.0, 0.0], 0.5), linear_radial(), samples=8, seed=5).to_dict()
        assert d['passed'] is True
        assert d['seed'] == 5
        assert d['points_checked'] == 8


class TestSignInvariant:
    """Tests for check_sign_invariant"""

    def test_radial(self):
        """Oriented circle: forward flow lands on the positive side"""
        m = sphere([0.0, 0.0], 1.0).oriented(-1)
        report = check_sign_invariant(m, linear_radial(), samples=8)
        assert report.passed
        assert report.checked == 8 * 6

    def test_wrong_orientation(self):
        """Without normalisation every sign is flipped"""
        report = check_sign_invariant(sphere([0.0, 0.0], 1.0), linear_radial(), samples=4)
        assert not report.passed
        assert len(report.violations) == report.checked


class TestRegistry:
    """Tests for build_manifold"""

    def test_sphere_spec(self):
        """Spheres build from center and radius"""
        m = build_manifold({'id': 'ball', 'kind': 'sphere', 'params': {'center': [0, 0], 'radius': 0.5}})
        assert m.id == 'ball'
        assert m.value([0.5, 0.0]) == pytest.approx(0.0)

    def test_stable_ball_spec(self):
        """Stable balls locate the attractor near the given centre"""
        f = double_well()
        m = build_manifold({'kind': 'stable_ball', 'params': {'center': [0.98, 0.01], 'a': 0.1}}, f, index=2)
        assert m.id == 'stable_ball-2'
        np.testing.assert_allclose(m.params['center'], [1.0, 0.0], atol=1e-8)

    def test_unknown_kind(self):
        """Unknown primitives are config errors"""
        with pytest.raises(ConfigError):
            build_manifold({'kind': 'torus', 'params': {}})

    def test_missing_parameter(self):
        """Missing parameters are config errors"""
        with pytest.raises(ConfigError):
            build_manifold({'kind': 'sphere', 'params': {'center': [0, 0]}})

    def test_field_required(self):
        """Drift-dependent primitives need a field"""
        with pytest.raises(ConfigError):
            build_manifold({'kind': 'level_of_potential', 'params': {'c': 0.1, 'box': [[-1, -1], [1, 1]]}})

    def test_duplicate_ids(self):
        """Scenario manifold ids are unique"""
        spec = {'id': 'a', 'kind': 'sphere', 'params': {'center': [0, 0], 'radius': 1}}
        with pytest.raises(ConfigError):
            build_manifolds([spec, spec])
