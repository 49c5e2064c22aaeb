"""
test_hitting.py

Tests for separatrix hitting points, density spikes and winding numbers.
"""

import numpy as np
import pytest

from src.qpactions import sde_randers_action
from src.qpcore import Box, PreconditionError
from src.qpcurves import Curve, segment
from src.qpfields import double_well, make_equilibrium, separatrix_from_saddle, trace_invariant_manifolds_2d
from src.qpminimize import (
    EndpointSet,
    MinimizeProblem,
    density_spikes,
    hitting_report,
    minimize,
    winding_number,
)


@pytest.fixture(scope='module')
def well():
    return double_well()


@pytest.fixture(scope='module')
def separatrix(well):
    saddle = make_equilibrium(well, [0.0, 0.0])
    return separatrix_from_saddle(trace_invariant_manifolds_2d(well, saddle, arc_budget=2.0))


@pytest.fixture(scope='module')
def minimizer(well):
    p = MinimizeProblem(sde_randers_action(well), EndpointSet.point([-1.0, 0.0]), EndpointSet.point([1.0, 0.0]),
                        nodes=200, box=Box.from_bounds([-2.0, -2.0], [2.0, 2.0]))
    return minimize(p)


class TestHittingReport:
    """Tests for hitting_report"""

    def test_crosses_at_saddle(self, well, separatrix, minimizer):
        """First and last hitting points sit next to the saddle"""
        r = hitting_report(minimizer, well, separatrix, [[0.0, 0.0]])
        assert r.crossed
        assert r.passed
        assert r.first_distance < 0.05
        assert r.last_distance < 0.05
        assert r.first_index <= r.last_index

    def test_downhill_is_free(self, well, separatrix, minimizer):
        """The part after the last hitting point costs almost nothing"""
        r = hitting_report(minimizer, well, separatrix, [[0.0, 0.0]], action=sde_randers_action(well))
        assert r.downhill_action < 1e-3 * r.total_action
        assert r.to_dict()['downhill_fraction'] < 1e-3

    def test_no_crossing(self, well, separatrix):
        """A curve inside one basin never meets the separatrix"""
        r = hitting_report(segment([-1.0, 0.0], [-0.5, 0.3], 20), well, separatrix, [[0.0, 0.0]])
        assert not r.crossed
        assert not r.passed
        assert r.to_dict()['reason'] == 'no crossing'

    def test_far_critical_point(self, well, separatrix, minimizer):
        """Hits far from every listed point fail"""
        r = hitting_report(minimizer, well, separatrix, [[0.0, 1.0]])
        assert r.crossed
        assert not r.passed


class TestDensitySpikes:
    """Tests for density_spikes"""

    def test_spike_at_saddle(self, well):
        """A bunched pair of nodes at the saddle is consistent"""
        c = Curve([[-1.0, 0.0], [-0.5, 0.0], [0.0, 0.0], [1e-5, 0.0], [0.5, 0.0], [1.0, 0.0]])
        report = density_spikes(c, well)
        assert report.spikes == [2]
        assert report.consistent

    def test_spike_away_from_critical_points(self, well):
        """A spike in the middle of a basin is flagged"""
        c = Curve([[-1.0, 0.0], [-0.5, 0.0], [-0.49999, 0.0], [0.5, 0.0], [1.0, 0.0]])
        report = density_spikes(c, well)
        assert report.spikes == [1]
        assert not report.consistent

    def test_redistributed_minimizer(self, well, minimizer):
        """The converged minimizer has no spikes"""
        report = density_spikes(minimizer, well, equilibria=[[0.0, 0.0]])
        assert report.spikes == []
        assert report.consistent


class TestWindingNumber:
    """Tests for winding_number"""

    def test_full_turn(self):
        """A closed circle winds once"""
        t = np.linspace(0.0, 2.0 * np.pi, 101)
        c = Curve(np.stack([np.cos(t), np.sin(t)], axis=-1))
        assert winding_number(c, [0.0, 0.0]) == pytest.approx(1.0)

    def test_half_turn_clockwise(self):
        """Orientation gives the sign"""
        t = np.linspace(0.0, -np.pi, 51)
        c = Curve(np.stack([np.cos(t), np.sin(t)], axis=-1))
        assert winding_number(c, [0.0, 0.0]) == pytest.approx(-0.5)

    def test_planar_only(self):
        """1-D curves have no winding number"""
        with pytest.raises(PreconditionError):
            winding_number(segment([0.0], [1.0]), [0.5])
