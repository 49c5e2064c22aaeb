"""
test_tracing.py

Tests for tracing functions, the clamp and the key estimate.
"""

import math

import numpy as np
import pytest

from src.qpactions import sde_randers_action
from src.qpcore import Box, ConfigError, PreconditionError, ShrinkEpsError, make_rng
from src.qpcurves import Curve, curve_length, reparameterize_arclength, segment
from src.qpfields import constant, double_well, linear_radial, make_equilibrium
from src.qpmanifolds import (
    TracingFunction,
    check_tracing,
    clamp,
    hyperplane,
    key_estimate_bound,
    sphere,
    tracing_from_equilibrium,
    tracing_from_manifold,
)

UNIT = Box.from_bounds([-1, -1], [1, 1])
STRIP_BOX = Box.from_bounds([-0.5, -1.0], [1.5, 1.0])


@pytest.fixture
def translation():
    return constant([1.0, 0.0])


@pytest.fixture
def strip():
    """f = x1 traces b = (1, 0) between 0 and 1 with H = G = 1"""
    return TracingFunction(lambda x: x[0], 0.0, 1.0, 1.0, 1.0, 2, branch=1, region_box=STRIP_BOX)


@pytest.fixture(scope='module')
def annulus():
    return tracing_from_manifold(sphere([0.0, 0.0], 1.0), linear_radial(), 0.3, samples=128)


class TestClamp:
    """Tests for clamp"""

    def test_values(self):
        """Above, below and inside the range"""
        assert clamp(0.0, 1.0, 1.7) == 1.0
        assert clamp(0.0, 1.0, -0.3) == 0.0
        assert clamp(0.0, 1.0, 0.4) == 0.4

    def test_empty_range(self):
        """q1 >= q2 is a config error"""
        with pytest.raises(ConfigError):
            clamp(1.0, 1.0, 0.5)


class TestTracingFunction:
    """Tests for the TracingFunction record"""

    def test_region(self, strip):
        """E is the open strip 0 < x1 < 1"""
        assert strip.in_region([0.5, 3.0])
        assert not strip.in_region([1.0, 0.0])
        assert strip.clamped([-2.0, 0.0]) == 0.0

    def test_validation(self):
        """Ranges and constants are validated"""
        with pytest.raises(ConfigError):
            TracingFunction(lambda x: x[0], 1.0, 0.0, 1.0, 1.0, 2)
        with pytest.raises(ConfigError):
            TracingFunction(lambda x: x[0], 0.0, 1.0, 1.0, 0.0, 2)


class TestFromManifold:
    """Tests for tracing_from_manifold"""

    def test_coordinate(self, translation):
        """A plane across a translation gives f = x1 clamped to [-0.6, 0.6]"""
        t = tracing_from_manifold(hyperplane([1.0, 0.0], 0.0, UNIT), translation, 0.3, samples=64)
        assert t([0.2, 0.5]) == pytest.approx(0.2, abs=1e-9)
        assert t([-0.1, 0.0]) == pytest.approx(-0.1, abs=1e-9)
        assert t([0.9, 0.0]) == pytest.approx(0.6)
        assert t([-0.9, -0.7]) == pytest.approx(-0.6)
        assert t.grad_bound == pytest.approx(1.0, rel=1e-4)
        assert t.min_drift == pytest.approx(1.0)
        assert (t.q1, t.q2) == (-0.3, 0.3)

    def test_vanishes_on_manifold(self, translation):
        """f^{-1}(0) is M"""
        t = tracing_from_manifold(hyperplane([1.0, 0.0], 0.0, UNIT), translation, 0.3, samples=32)
        assert t([0.0, 0.4]) == 0.0

    def test_annulus(self, annulus):
        """b = -x and the unit circle: f(x) = 1 - |x| within two eps"""
        rng = make_rng(8)
        for r in (0.5, 0.8, 1.0, 1.2, 1.5):
            phi = rng.uniform(0.0, 2.0 * math.pi)
            x = r * np.array([math.cos(phi), math.sin(phi)])
            assert annulus(x) == pytest.approx(1.0 - r, abs=1e-8)
        assert annulus([0.2, 0.0]) == pytest.approx(0.6)
        assert annulus([0.0, 0.0]) == pytest.approx(0.6)

    def test_annulus_constants(self, annulus):
        """H = 1 and G is the smallest radius sampled in the annulus"""
        assert annulus.grad_bound == pytest.approx(1.0, abs=1e-3)
        assert 0.7 <= annulus.min_drift < 1.0
        assert annulus.branch == 1

    def test_tracing_property(self, annulus):
        """<grad f, b> = |b| on sampled E"""
        check = check_tracing(annulus, linear_radial(), samples=64)
        assert check.checked > 0
        assert check.uniform
        assert check.branch == 1
        assert check.passed

    def test_shrink_eps(self, translation):
        """Samples near a plane parallel to b are unreachable"""
        with pytest.raises(ShrinkEpsError):
            tracing_from_manifold(hyperplane([0.0, 1.0], 0.0, UNIT), translation, 0.3, samples=32, t_max=5.0)

    def test_bad_eps(self, translation):
        """eps must be positive"""
        with pytest.raises(ConfigError):
            tracing_from_manifold(hyperplane([1.0, 0.0], 0.0, UNIT), translation, 0.0)


class TestFromEquilibrium:
    """Tests for tracing_from_equilibrium"""

    @pytest.fixture(scope='class')
    def radial(self):
        f = linear_radial()
        return f, tracing_from_equilibrium(f, make_equilibrium(f, [0.0, 0.0]), 0.5, samples=64)

    def test_values(self, radial):
        """f_1(w) = min(|w|, 0.5)"""
        _, t = radial
        assert t([0.3, 0.0]) == pytest.approx(0.3, abs=1e-8)
        assert t([0.1, -0.2]) == pytest.approx(math.hypot(0.1, 0.2), abs=1e-8)
        assert t([0.4, 0.4]) == 0.5
        assert t([0.0, 0.0]) == 0.0
        assert (t.q1, t.q2, t.branch) == (0.0, 0.5, -1)

    def test_lower_bound(self, radial):
        """f_1(w) >= min(|w|, eps)"""
        _, t = radial
        for w in make_rng(2).uniform(-0.7, 0.7, (30, 2)):
            assert t(w) >= min(np.linalg.norm(w), 0.5) - 1e-9

    def test_tracing_property(self, radial):
        """<grad f_1, b> = -|b| towards the attractor"""
        f, t = radial
        check = check_tracing(t, f, samples=32)
        assert check.passed
        assert check.branch == -1

    def test_saddle_rejected(self):
        """Saddles need the separate saddle construction"""
        f = double_well()
        with pytest.raises(PreconditionError):
            tracing_from_equilibrium(f, make_equilibrium(f, [0.0, 0.0]), 0.1)


class TestKeyEstimate:
    """Tests for key_estimate_bound"""

    def test_reverse_unit_segment(self, strip, translation):
        """Against the flow across the strip: lhs 1, rhs 2 * 2 + 2 * 1"""
        a = sde_randers_action(translation)
        lhs, rhs = key_estimate_bound(strip, a, 1.0, segment([1, 0], [0, 0], 11))
        assert lhs == pytest.approx(1.0)
        assert rhs == pytest.approx(6.0)

    def test_flowline_segment(self, strip, translation):
        """Along the flow inside E the clamp term carries the bound"""
        a = sde_randers_action(translation)
        lhs, rhs = key_estimate_bound(strip, a, 1.0, segment([0.2, 0.3], [0.7, 0.3], 11))
        assert lhs == pytest.approx(0.5)
        assert rhs == pytest.approx(1.0)

    def test_random_sweep(self, strip, translation):
        """No counterexample among 100 random polylines"""
        a = sde_randers_action(translation)
        rng = make_rng(13)
        for _ in range(100):
            c = Curve(rng.uniform([-0.5, -1.0], [1.5, 1.0], (4, 2)))
            spacing = curve_length(c) / 200
            c = reparameterize_arclength(c, 201)
            lhs, rhs = key_estimate_bound(strip, a, 1.0, c)
            assert lhs <= rhs + 1e-6 + 2.0 * spacing

    def test_bad_constant(self, strip, translation):
        """A_const must be positive"""
        with pytest.raises(ConfigError):
            key_estimate_bound(strip, sde_randers_action(translation), 0.0, segment([0, 0], [1, 0]))
