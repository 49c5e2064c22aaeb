"""
test_classify.py

Tests for scenario contexts, point and grid classification and verdict
output.
"""

import csv
import io
import json

import numpy as np
import pytest

from src.qpactions import agmon_action, riemannian_action, sde_randers_action
from src.qpcore import Box, ConfigError, GridSpec
from src.qpfields import double_well, limit_cycle
from src.qpmanifolds import level_of_potential, sphere
from src.qpcriteria import (
    CriteriaVerdict,
    Criterion,
    Verdict,
    build_context,
    classify_grid,
    classify_point,
    classify_points,
    format_verdicts_csv,
    format_verdicts_json,
    summarize,
    verdicts_document,
    write_verdicts_json,
)

WELL_BOX = Box.from_bounds([-2.0, -2.0], [2.0, 2.0])


@pytest.fixture(scope='module')
def well_context():
    f = double_well()
    manifolds = [sphere([-1.0, 0.0], 0.1, 'left'), sphere([1.0, 0.0], 0.1, 'right'),
                 level_of_potential(f, 5.0, Box.from_bounds([-3.0, -3.5], [3.0, 3.5]), 'outer')]
    return build_context(sde_randers_action(f), manifolds=manifolds, search_box=WELL_BOX)


@pytest.fixture(scope='module')
def cycle_context():
    f = limit_cycle()
    manifolds = [sphere([0.0, 0.0], 0.5, 'inner'), sphere([0.0, 0.0], 2.0, 'outer'),
                 sphere([1.0, 0.0], 0.5, 'loop')]
    return build_context(sde_randers_action(f), manifolds=manifolds,
                         search_box=Box.from_bounds([-0.5, -0.5], [0.5, 0.5]), cycle_seeds=[[0.5, 0.0]])


class TestVerdictRecord:
    """Tests for CriteriaVerdict consistency"""

    def test_strong_needs_criterion(self):
        """strong without a criterion is rejected"""
        with pytest.raises(ConfigError):
            CriteriaVerdict((0.0, 0.0), Verdict.STRONG)

    def test_non_existence_needs_cycle(self):
        """non-existence comes from the limit-cycle criterion only"""
        with pytest.raises(ConfigError):
            CriteriaVerdict((0.0, 0.0), Verdict.NON_EXISTENCE, Criterion.PROP1)

    def test_weak_from_prop2_only(self):
        """prop0 never gives weak verdicts"""
        with pytest.raises(ConfigError):
            CriteriaVerdict((0.0, 0.0), Verdict.WEAK, Criterion.PROP0)

    def test_dict(self):
        """NaN margins serialise as null"""
        d = CriteriaVerdict((1.0, 2.0), Verdict.NONE_APPLICABLE).to_dict()
        assert d == {'point': [1.0, 2.0], 'verdict': 'none-applicable', 'criterion': None,
                     'margin': None, 'evidence': {}}


class TestContext:
    """Tests for build_context"""

    def test_well(self, well_context):
        """All three manifolds pass; saddle and both wells are found"""
        assert [m.id for m in well_context.manifolds] == ['left', 'right', 'outer']
        assert not well_context.rejected
        kinds = sorted(e.kind.value for e in well_context.equilibria)
        assert kinds == ['attractor', 'attractor', 'saddle']

    def test_loop_rejected_with_certificate(self, cycle_context):
        """A loop across the cycle is crossed both ways"""
        assert [m.id for m in cycle_context.manifolds] == ['inner', 'outer']
        (report,) = cycle_context.rejected
        assert report.manifold_id == 'loop'
        assert report.flip_pair is not None

    def test_cycle_traced(self, cycle_context):
        """The unit circle is found from (0.5, 0)"""
        (cycle,) = cycle_context.cycles
        np.testing.assert_allclose(np.linalg.norm(cycle.nodes, axis=1), 1.0, atol=1e-5)

    def test_manifolds_need_drift(self):
        """Driftless actions cannot check manifolds"""
        with pytest.raises(ConfigError):
            build_context(riemannian_action(), manifolds=[sphere([0.0, 0.0], 1.0)])

    def test_context_dict(self, cycle_context):
        """The context serialises its rejected manifolds and cycles"""
        d = cycle_context.to_dict()
        assert d['action'] == 'sde_randers'
        assert len(d['rejected']) == 1
        assert d['cycles'][0]['found'] is True


class TestClassifyPoint:
    """Tests for classify_point precedence"""

    def test_basin(self, well_context):
        """Off-equilibrium points go through prop1"""
        v = classify_point(well_context, [0.5, 0.2])
        assert (v.verdict, v.criterion) == (Verdict.STRONG, Criterion.PROP1)

    def test_wells_and_saddle(self, well_context):
        """Equilibria go through prop2"""
        assert classify_point(well_context, [-1.0, 0.0]).criterion == Criterion.PROP2_ATTRACTOR
        saddle = classify_point(well_context, [0.0, 0.0])
        assert (saddle.verdict, saddle.criterion) == (Verdict.STRONG, Criterion.PROP2_SADDLE)

    def test_cycle_non_existence(self, cycle_context):
        """Every traced point of the cycle gets non-existence"""
        nodes = cycle_context.cycles[0].nodes[::40]
        verdicts = classify_points(cycle_context, nodes)
        assert all(v.verdict == Verdict.NON_EXISTENCE for v in verdicts)
        assert all(v.criterion == Criterion.LIMIT_CYCLE_NEGATIVE for v in verdicts)

    def test_off_cycle(self, cycle_context):
        """Inside the cycle, flowlines leave the inner circle; the origin is a repellor"""
        assert classify_point(cycle_context, [0.3, 0.0]).criterion == Criterion.PROP1
        origin = classify_point(cycle_context, [0.0, 0.0])
        assert (origin.verdict, origin.criterion) == (Verdict.STRONG, Criterion.PROP2_REPELLOR)

    def test_cycle_for_non_h0_action(self):
        """A potential vanishing on the cycle gives none-applicable there"""
        f = limit_cycle()
        a = agmon_action(lambda X: 0.5 * (1.0 - np.sum(X ** 2, axis=1)) ** 4, 2)
        ctx = build_context(a, field=f, cycle_seeds=[[0.5, 0.0]])
        v = classify_point(ctx, ctx.cycles[0].nodes[0])
        assert v.verdict == Verdict.NONE_APPLICABLE
        assert v.evidence['reason'] == 'on a limit cycle'
        assert classify_point(ctx, [0.2, 0.1]).criterion == Criterion.PROP0

    def test_agmon_root(self):
        """Roots of U go through the borrowed repelling drift"""
        a = agmon_action(lambda X: 0.5 * np.sum(X ** 2, axis=1), 2)
        ctx = build_context(a)
        v = classify_point(ctx, [0.0, 0.0])
        assert (v.verdict, v.criterion) == (Verdict.STRONG, Criterion.PROP2_REPELLOR)
        assert classify_point(ctx, [0.5, 0.5]).criterion == Criterion.PROP0

    def test_uncovered_point(self):
        """No manifolds means no prop1 verdict"""
        f = double_well()
        ctx = build_context(sde_randers_action(f), search_box=WELL_BOX)
        v = classify_point(ctx, [0.5, 0.2])
        assert v.verdict == Verdict.NONE_APPLICABLE
        assert v.evidence['reason'] == 'no manifold crossing'


class TestClassifyGrid:
    """Tests for classify_grid"""

    def test_riemannian_all_prop0(self):
        """Riemannian scenarios are strong everywhere"""
        ctx = build_context(riemannian_action())
        verdicts = classify_grid(ctx, GridSpec(WELL_BOX, (5, 5)))
        assert len(verdicts) == 25
        assert all(v.criterion == Criterion.PROP0 for v in verdicts)
        assert summarize(verdicts).coverage == 1.0

    def test_well_coarse_grid(self, well_context):
        """Every point of a coarse grid over the double well is covered"""
        verdicts = classify_grid(well_context, GridSpec(WELL_BOX, (5, 5)))
        assert summarize(verdicts).coverage == 1.0

    def test_deterministic(self, well_context):
        """Repeated and threaded runs agree exactly"""
        grid = GridSpec(Box.from_bounds([-1.5, -1.0], [1.5, 1.0]), (3, 3))
        first = [v.to_dict() for v in classify_grid(well_context, grid)]
        again = [v.to_dict() for v in classify_grid(well_context, grid, threads=2)]
        assert first == again

    def test_dimension_mismatch(self, well_context):
        """Grid and scenario dimensions must agree"""
        with pytest.raises(ConfigError):
            classify_grid(well_context, GridSpec(Box.from_bounds([0.0], [1.0]), (3,)))


class TestOutput:
    """Tests for verdict CSV and JSON"""

    @pytest.fixture(scope='class')
    def verdicts(self, well_context):
        return classify_points(well_context, [[0.5, 0.2], [1.0, 0.0]])

    def test_csv(self, verdicts):
        """Header x1..xn,verdict,criterion,margin and one row per point"""
        rows = list(csv.reader(io.StringIO(format_verdicts_csv(verdicts))))
        assert rows[0] == ['x1', 'x2', 'verdict', 'criterion', 'margin']
        assert rows[1][:4] == ['0.5', '0.20000000000000001', 'strong', 'prop1']
        assert rows[2][3] == 'prop2-attractor'

    def test_json(self, verdicts):
        """A JSON array of verdict objects"""
        data = json.loads(format_verdicts_json(verdicts))
        assert [d['criterion'] for d in data] == ['prop1', 'prop2-attractor']

    def test_document(self, verdicts, well_context, tmp_path):
        """Documents carry summary and context"""
        path = write_verdicts_json(verdicts, tmp_path / 'verdicts.json', context=well_context.to_dict())
        doc = json.loads(path.read_text())
        assert doc['summary']['total'] == 2
        assert doc['summary']['coverage'] == 1.0
        assert doc['context']['action'] == 'sde_randers'
        assert verdicts_document(verdicts)['summary']['by_verdict'] == {'strong': 2}
