"""
test_solver.py

Tests for the discrete gradient and the curve relaxation.
"""

import numpy as np
import pytest

from src.qpactions import (
    agmon_action,
    birth_death_hamiltonian,
    from_hamiltonian,
    riemannian_action,
    sde_randers_action,
)
from src.qpcore import ActionEvaluationError, Box, make_rng, numerical_gradient
from src.qpcurves import Curve, curve_length
from src.qpfields import double_well
from src.qpfunctional import geometric_action
from src.qpminimize import (
    EndpointSet,
    MinimizeProblem,
    discrete_gradient,
    minimize,
    write_minimize_result,
)

WELL_BOX = Box.from_bounds([-2.0, -2.0], [2.0, 2.0])


@pytest.fixture(scope='module')
def well_result():
    f = double_well()
    p = MinimizeProblem(sde_randers_action(f), EndpointSet.point([-1.0, 0.0]), EndpointSet.point([1.0, 0.0]),
                        nodes=200, box=WELL_BOX)
    return minimize(p)


class TestDiscreteGradient:
    """Tests for discrete_gradient"""

    def test_matches_full_difference(self):
        """The parity split reproduces the gradient of the whole sum"""
        a = sde_randers_action(double_well())
        nodes = make_rng(3).uniform(-1.0, 1.0, (7, 2))

        def total(flat):
            return geometric_action(a, Curve(flat.reshape(7, 2)))

        expected = numerical_gradient(total, nodes.ravel(), h=1e-6).reshape(7, 2)
        np.testing.assert_allclose(discrete_gradient(a, nodes, 1e-6), expected, atol=1e-8)

    def test_threads_agree(self):
        """Threaded evaluation gives identical entries"""
        a = riemannian_action()
        nodes = make_rng(4).uniform(-1.0, 1.0, (9, 2))
        np.testing.assert_array_equal(discrete_gradient(a, nodes, 1e-6, threads=1),
                                      discrete_gradient(a, nodes, 1e-6, threads=3))


class TestMinimize:
    """Tests for minimize"""

    def test_riemannian_straight(self):
        """The Euclidean geodesic is the segment"""
        p = MinimizeProblem(riemannian_action(), EndpointSet.point([0.0, 0.0]), EndpointSet.point([3.0, 4.0]),
                            nodes=32)
        r = minimize(p)
        assert r.action_value == pytest.approx(5.0, rel=1e-12)
        assert r.converged
        assert r.iterations <= 200

    def test_riemannian_bent_seed(self):
        """A tent relaxes to the segment"""
        p = MinimizeProblem(riemannian_action(), EndpointSet.point([0.0, 0.0]), EndpointSet.point([2.0, 0.0]),
                            nodes=16, max_iters=3000)
        tent = Curve([[0.0, 0.0], [1.0, 1.0], [2.0, 0.0]])
        r = minimize(p, initial=tent)
        assert r.converged
        assert r.action_value == pytest.approx(2.0, rel=1e-3)
        assert r.action_value < r.seed_action
        assert np.max(np.abs(r.curve.nodes[:, 1])) < 0.05
        assert r.monotone

    def test_double_well(self, well_result):
        """2 (V(0, 0) - V(-1, 0)) = 1/2"""
        assert 0.495 <= well_result.action_value <= 0.505
        assert well_result.converged
        np.testing.assert_array_equal(well_result.curve.start, [-1.0, 0.0])
        np.testing.assert_array_equal(well_result.curve.end, [1.0, 0.0])

    def test_refinement(self, well_result):
        """Halving the node count changes the action by less than 0.5%"""
        f = double_well()
        p = MinimizeProblem(sde_randers_action(f), EndpointSet.point([-1.0, 0.0]), EndpointSet.point([1.0, 0.0]),
                            nodes=100, box=WELL_BOX)
        coarse = minimize(p).action_value
        assert abs(coarse - well_result.action_value) < 5e-3 * well_result.action_value

    def test_double_well_from_detour(self):
        """A detour above the saddle is shortened monotonically"""
        f = double_well()
        p = MinimizeProblem(sde_randers_action(f), EndpointSet.point([-1.0, 0.0]), EndpointSet.point([1.0, 0.0]),
                            nodes=64, box=WELL_BOX, max_iters=300)
        r = minimize(p, initial=Curve([[-1.0, 0.0], [0.0, 0.4], [1.0, 0.0]]))
        assert r.monotone
        assert r.action_value < r.seed_action
        assert r.action_value > 0.49
        assert all(b < a for a, b in zip(r.action_history, r.action_history[1:]))

    def test_birth_death(self):
        """The jump-process quasipotential from 1 to 2 is 2 ln 2 - 1"""
        a = from_hamiltonian(birth_death_hamiltonian())
        p = MinimizeProblem(a, EndpointSet.point([1.0]), EndpointSet.point([2.0]), nodes=200,
                            box=Box.from_bounds([0.5], [2.5]))
        r = minimize(p)
        assert r.action_value == pytest.approx(2.0 * np.log(2.0) - 1.0, rel=1e-2)
        assert r.converged

    def test_free_end_on_sphere(self):
        """The free end stays on the nearest sphere point"""
        p = MinimizeProblem(riemannian_action(), EndpointSet.point([0.0, 0.0]),
                            EndpointSet.sphere([3.0, 0.0], 1.0), nodes=16)
        r = minimize(p)
        assert r.action_value == pytest.approx(2.0, rel=1e-9)
        assert p.end_set.contains(r.curve.end)

    def test_box_clamping(self):
        """Seeds outside the box are clamped and the clamping is reported"""
        p = MinimizeProblem(riemannian_action(), EndpointSet.point([0.0, 0.0]), EndpointSet.point([2.0, 0.0]),
                            nodes=16, box=Box.from_bounds([-1.0, -0.2], [3.0, 0.2]))
        r = minimize(p, initial=Curve([[0.0, 0.0], [1.0, 1.0], [2.0, 0.0]]))
        assert r.clamp_count >= 1
        assert p.box.contains_all(r.curve.nodes)
        assert r.action_value < 2.1

    def test_action_failure_carries_iteration(self):
        """A negative potential fails the seed evaluation"""
        a = agmon_action(lambda X: X[:, 0] - 0.5, 2)
        p = MinimizeProblem(a, EndpointSet.point([0.0, 0.0]), EndpointSet.point([1.0, 0.0]), nodes=16)
        with pytest.raises(ActionEvaluationError) as exc:
            minimize(p)
        assert exc.value.iteration == 0

    def test_deterministic(self):
        """Runs agree across thread counts"""
        f = double_well()
        p = MinimizeProblem(sde_randers_action(f), EndpointSet.point([-1.0, 0.0]), EndpointSet.point([1.0, 0.0]),
                            nodes=32, box=WELL_BOX, max_iters=40)
        seed = Curve([[-1.0, 0.0], [0.0, 0.3], [1.0, 0.0]])
        one = minimize(p, initial=seed, threads=1)
        two = minimize(p, initial=seed, threads=2)
        assert one.action_history == two.action_history
        np.testing.assert_array_equal(one.curve.nodes, two.curve.nodes)


class TestOutput:
    """Tests for the curve CSV and JSON sidecar"""

    def test_files(self, well_result, tmp_path):
        """Both files are written and the sidecar carries the action"""
        import json
        csv_path, json_path = write_minimize_result(well_result, tmp_path)
        assert csv_path.read_text().splitlines()[0] == 'i,x1,x2,s'
        doc = json.loads(json_path.read_text())
        assert doc['action'] == well_result.action_value
        assert doc['converged'] is True
        assert doc['parameters']['nodes'] == 200
        assert doc['seed'] == well_result.parameters['seed']

    def test_length_reported(self, well_result):
        """The minimizer runs along the x axis"""
        assert curve_length(well_result.curve) == pytest.approx(2.0, rel=1e-9)
