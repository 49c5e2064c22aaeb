"""
test_equilibria.py

Tests for equilibria, flowline distances and planar invariant manifolds.
"""

import numpy as np
import pytest

from src.qpcore import (
    Box,
    DegenerateSaddleError,
    GridSpec,
    NotInBasinError,
    PreconditionError,
)
from src.qpfields import (
    Equilibrium,
    EquilibriumKind,
    FlowField,
    classify_eigenvalues,
    constant,
    double_well,
    find_equilibria,
    flow,
    linear_bound_constant,
    linear_radial,
    separatrix_from_saddle,
    stable_distance,
    trace_invariant_manifolds_2d,
    triple_well,
    unstable_distance,
)

SQUARE = Box.from_bounds([-2, -2], [2, 2])


@pytest.fixture
def dw_equilibria():
    return find_equilibria(double_well(), SQUARE)


class TestClassification:
    """Tests for classify_eigenvalues"""

    def test_kinds(self):
        """Sign patterns of real parts"""
        assert classify_eigenvalues([-1, -2]) == EquilibriumKind.ATTRACTOR
        assert classify_eigenvalues([1, 2 + 1j, 2 - 1j]) == EquilibriumKind.REPELLOR
        assert classify_eigenvalues([-1, 1]) == EquilibriumKind.SADDLE
        assert classify_eigenvalues([-1, 1e-9]) == EquilibriumKind.DEGENERATE


class TestFindEquilibria:
    """Tests for find_equilibria"""

    def test_double_well(self, dw_equilibria):
        """Two attractors and a saddle"""
        assert len(dw_equilibria) == 3
        left, mid, right = dw_equilibria
        np.testing.assert_allclose(left.point, [-1, 0], atol=1e-10)
        np.testing.assert_allclose(mid.point, [0, 0], atol=1e-10)
        np.testing.assert_allclose(right.point, [1, 0], atol=1e-10)
        assert left.kind == EquilibriumKind.ATTRACTOR
        assert mid.kind == EquilibriumKind.SADDLE
        assert right.kind == EquilibriumKind.ATTRACTOR

    def test_radial(self):
        """b = -x has one attractor with eigenvalues -1, -1"""
        eqs = find_equilibria(linear_radial(), SQUARE)
        assert len(eqs) == 1
        assert eqs[0].kind == EquilibriumKind.ATTRACTOR
        np.testing.assert_allclose(np.real(eqs[0].eigenvalues), [-1, -1])

    def test_constant_has_none(self):
        """Constant drift has no roots"""
        assert find_equilibria(constant([1.0, 0.0]), SQUARE) == []

    def test_triple_well(self):
        """Three attractors separated by two saddles"""
        eqs = find_equilibria(triple_well(), SQUARE, GridSpec(SQUARE, (41, 3)))
        kinds = [e.kind for e in eqs]
        assert kinds.count(EquilibriumKind.ATTRACTOR) == 3
        assert kinds.count(EquilibriumKind.SADDLE) == 2
        saddles = sorted(e.location[0] for e in eqs if e.kind == EquilibriumKind.SADDLE)
        assert saddles == pytest.approx([-1 / np.sqrt(3), 1 / np.sqrt(3)], abs=1e-9)

    def test_residual(self, dw_equilibria):
        """Every root has |b| < 1e-10"""
        f = double_well()
        for eq in dw_equilibria:
            assert np.linalg.norm(f.b(eq.point)) < 1e-10

    def test_to_dict(self, dw_equilibria):
        """Serialised kind and eigenvalue pairs"""
        d = dw_equilibria[1].to_dict()
        assert d['kind'] == 'saddle'
        assert len(d['eigenvalues']) == 2


class TestStableDistance:
    """Tests for stable_distance / unstable_distance"""

    def test_radial(self):
        """Radial field: f_s(w) = |w|"""
        eq = find_equilibria(linear_radial(), SQUARE)[0]
        w = 0.3 * np.array([np.cos(0.4), np.sin(0.4)])
        assert stable_distance(linear_radial(), eq, w) == pytest.approx(0.3, abs=1e-8)

    def test_at_equilibrium(self):
        """Distance from the equilibrium itself is 0"""
        eq = find_equilibria(linear_radial(), SQUARE)[0]
        assert stable_distance(linear_radial(), eq, eq.point) == 0.0

    def test_straight_flowline(self, dw_equilibria):
        """Double well along the x axis: exactly the distance 0.5"""
        d = stable_distance(double_well(), dw_equilibria[2], [0.5, 0.0])
        assert d == pytest.approx(0.5, abs=1e-7)

    def test_lower_bound_and_decrease(self, dw_equilibria):
        """f_s >= |w - eq| and f_s decreases along the flow"""
        f, eq = double_well(), dw_equilibria[2]
        w = np.array([0.3, 0.6])
        d0 = stable_distance(f, eq, w)
        assert d0 >= np.linalg.norm(w - eq.point)
        d1 = stable_distance(f, eq, flow(f, w, 0.5))
        assert d1 < d0

    def test_not_in_basin(self, dw_equilibria):
        """Points of the other basin never arrive"""
        with pytest.raises(NotInBasinError):
            stable_distance(double_well(), dw_equilibria[2], [-0.5, 0.0], t_max=50.0)

    def test_escape_from_box(self, dw_equilibria):
        """Leaving the given box is not-in-basin"""
        f = double_well().reversed()
        eq = Equilibrium((1.0, 0.0), (-2.0, -1.0), EquilibriumKind.ATTRACTOR)
        with pytest.raises(NotInBasinError):
            stable_distance(f, eq, [0.5, 0.1], box=SQUARE)

    def test_wrong_kind(self, dw_equilibria):
        """Saddles are rejected"""
        with pytest.raises(PreconditionError):
            stable_distance(double_well(), dw_equilibria[1], [0.1, 0.1])

    def test_unstable_distance(self):
        """Repellor of b = x: f_u(w) = |w|"""
        f = linear_radial(rate=-1.0)
        eq = find_equilibria(f, SQUARE)[0]
        assert eq.kind == EquilibriumKind.REPELLOR
        assert unstable_distance(f, eq, [0.0, -0.4]) == pytest.approx(0.4, abs=1e-8)

    def test_linear_bound_constant(self):
        """Radial field has D = 1"""
        f = linear_radial()
        eq = find_equilibria(f, SQUARE)[0]
        assert linear_bound_constant(f, eq, 0.5, samples=16) == pytest.approx(1.0, abs=1e-6)


class TestInvariantManifolds:
    """Tests for trace_invariant_manifolds_2d"""

    def test_double_well_branches(self, dw_equilibria):
        """Unstable branches on the x axis, stable branches on the y axis"""
        saddle = dw_equilibria[1]
        m = trace_invariant_manifolds_2d(double_well(), saddle, arc_budget=2.0, nodes=200)
        for branch in (m.unstable_plus, m.unstable_minus):
            assert np.max(np.abs(branch.nodes[:, 1])) < 1e-6
            np.testing.assert_array_equal(branch.nodes[0], saddle.point)
            np.testing.assert_allclose(branch.nodes[0], [0.0, 0.0], atol=1e-10)
        for branch in (m.stable_plus, m.stable_minus):
            assert np.max(np.abs(branch.nodes[:, 0])) < 1e-6
            assert branch.cumulative_length[-1] == pytest.approx(2.0, abs=1e-6)
            assert abs(branch.nodes[-1, 1]) == pytest.approx(2.0, abs=1e-6)

    def test_unstable_branch_stops_at_attractor(self, dw_equilibria):
        """Unstable branches end at the attractors after arclength 1"""
        m = trace_invariant_manifolds_2d(double_well(), dw_equilibria[1], arc_budget=4.0, nodes=100)
        ends = sorted(b.nodes[-1, 0] for b in (m.unstable_plus, m.unstable_minus))
        assert ends == pytest.approx([-1.0, 1.0], abs=1e-6)
        assert m.unstable_plus.cumulative_length[-1] == pytest.approx(1.0, abs=1e-6)

    def test_separatrix(self, dw_equilibria):
        """The separatrix runs along the y axis through the saddle"""
        m = trace_invariant_manifolds_2d(double_well(), dw_equilibria[1], arc_budget=1.5, nodes=50)
        sep = separatrix_from_saddle(m)
        assert len(sep) == 99
        assert np.max(np.abs(sep.nodes[:, 0])) < 1e-6
        assert sep.nodes[0, 1] == pytest.approx(-1.5, abs=1e-6)
        assert sep.nodes[-1, 1] == pytest.approx(1.5, abs=1e-6)

    def test_not_a_saddle(self, dw_equilibria):
        """Attractors are rejected"""
        with pytest.raises(PreconditionError):
            trace_invariant_manifolds_2d(double_well(), dw_equilibria[0], 1.0)

    def test_complex_eigenvalues(self):
        """A rotation Jacobian cannot be a saddle"""
        f = FlowField(2, lambda X: np.stack([X[:, 1], -X[:, 0]], axis=-1),
                      lambda p: np.array([[0.0, 1.0], [-1.0, 0.0]]))
        fake = Equilibrium((0.0, 0.0), (-1.0, 1.0), EquilibriumKind.SADDLE)
        with pytest.raises(DegenerateSaddleError):
            trace_invariant_manifolds_2d(f, fake, 1.0)
