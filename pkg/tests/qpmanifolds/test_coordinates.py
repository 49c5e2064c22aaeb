"""
test_coordinates.py

Tests for flow coordinates and manifold evolution.
"""

import math

import numpy as np
import pytest

from src.qpcore import Box, NotReachableError, make_rng
from src.qpfields import constant, flow, linear_radial, make_equilibrium
from src.qpmanifolds import (
    check_admissible,
    evolve_manifold,
    flow_coordinates,
    hyperplane,
    locate,
    sphere,
    stable_ball,
    zero_set_points,
)

UNIT = Box.from_bounds([-1, -1], [1, 1])


@pytest.fixture
def translation():
    return constant([1.0, 0.0])


@pytest.fixture
def wall():
    return hyperplane([1.0, 0.0], 0.0, UNIT)


class TestFlowCoordinates:
    """Tests for flow_coordinates"""

    def test_translation(self, translation, wall):
        """x = (0.7, 0.3) comes from z = (0, 0.3) after t = 0.7"""
        z, t = flow_coordinates(wall, translation, [0.7, 0.3])
        np.testing.assert_allclose(z, [0.0, 0.3], atol=1e-10)
        assert t == pytest.approx(0.7, abs=1e-9)

    def test_upstream(self, translation, wall):
        """Points before the wall have negative time"""
        z, t = flow_coordinates(wall, translation, [-0.4, 0.1])
        np.testing.assert_allclose(z, [0.0, 0.1], atol=1e-10)
        assert t == pytest.approx(-0.4, abs=1e-9)

    def test_on_manifold(self, translation, wall):
        """x on M gives t = 0 and z = x"""
        z, t = flow_coordinates(wall, translation, [0.0, 0.42])
        assert t == 0.0
        np.testing.assert_array_equal(z, [0.0, 0.42])

    def test_radial(self):
        """b = -x: x = (1/e, 0) left the unit circle at (1, 0) one time unit ago"""
        z, t = flow_coordinates(sphere([0.0, 0.0], 1.0), linear_radial(), [math.exp(-1.0), 0.0])
        assert t == pytest.approx(1.0, abs=1e-8)
        np.testing.assert_allclose(z, [1.0, 0.0], atol=1e-8)
        assert abs(sphere([0.0, 0.0], 1.0).value(z)) < 1e-10

    def test_round_trip(self):
        """psi(z, t) reproduces x"""
        f = linear_radial()
        m = sphere([0.0, 0.0], 1.0)
        rng = make_rng(11)
        for _ in range(10):
            r = rng.uniform(0.3, 2.0)
            phi = rng.uniform(0.0, 2.0 * math.pi)
            x = r * np.array([math.cos(phi), math.sin(phi)])
            z, t = flow_coordinates(m, f, x)
            assert np.linalg.norm(flow(f, z, t) - x) < 1e-8
            assert t == pytest.approx(-math.log(r), abs=1e-8)

    def test_not_reachable(self, translation):
        """Flowlines parallel to M never cross it"""
        m = hyperplane([0.0, 1.0], 0.0, UNIT)
        with pytest.raises(NotReachableError):
            flow_coordinates(m, translation, [0.0, 0.5], t_max=10.0)

    def test_locate_budget(self, translation, wall):
        """An arclength budget turns distant points into misses"""
        assert locate(wall, translation, [0.8, 0.0], max_arclength=0.5) is None
        found = locate(wall, translation, [0.3, 0.0], max_arclength=0.5)
        assert found.arclength == pytest.approx(0.3, abs=1e-9)

    def test_stable_ball_locator(self):
        """Balls around an attractor are reached by travelling f_s - a"""
        f = linear_radial()
        ball = stable_ball(f, make_equilibrium(f, [0.0, 0.0]), 0.3).oriented(-1)
        found = locate(ball, f, [0.9, 0.0])
        np.testing.assert_allclose(found.z, [0.3, 0.0], atol=1e-8)
        assert found.t == pytest.approx(-math.log(3.0), abs=1e-7)
        assert found.arclength == pytest.approx(0.6, abs=1e-8)
        inside = locate(ball, f, [0.0, 0.1])
        np.testing.assert_allclose(inside.z, [0.0, 0.3], atol=1e-8)
        assert inside.t == pytest.approx(math.log(3.0), abs=1e-7)
        assert locate(ball, f, [0.9, 0.0], max_arclength=0.5) is None


class TestEvolveManifold:
    """Tests for evolve_manifold"""

    def test_translation(self, translation, wall):
        """beta = 1 shifts the plane by T"""
        moved = evolve_manifold(wall, translation, 1.0, 0.5, samples=8)
        for x in ([0.8, 0.0], [0.1, -0.4], [0.5, 0.9]):
            assert moved.value(x) == pytest.approx(x[0] - 0.5, abs=1e-9)
        assert check_admissible(moved, translation, samples=8).passed

    def test_frozen(self, translation, wall):
        """beta = 0 leaves f_M unchanged"""
        moved = evolve_manifold(wall, translation, 0.0, 3.0, samples=8)
        X = make_rng(4).uniform(-1, 1, (10, 2))
        np.testing.assert_allclose(moved.values(X), wall.values(X), atol=1e-14)

    def test_radial_contraction(self):
        """The unit circle flows to radius 1/2 after T = ln 2"""
        f = linear_radial()
        moved = evolve_manifold(sphere([0.0, 0.0], 1.0), f, 1.0, math.log(2.0), samples=8)
        Z = zero_set_points(moved, samples=8)
        np.testing.assert_allclose(np.linalg.norm(Z, axis=1), 0.5, atol=1e-7)
        assert check_admissible(moved, f, samples=8).passed

    def test_variable_speed(self, translation, wall):
        """beta = 2 moves twice as far"""
        moved = evolve_manifold(wall, translation, lambda x: 2.0, 0.25, samples=8)
        assert moved.value([0.5, 0.3]) == pytest.approx(0.0, abs=1e-9)
