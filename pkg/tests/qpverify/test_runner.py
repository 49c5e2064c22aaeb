"""
test_runner.py

Tests for the suite runner and its reports.
"""

from typing import List

from src.qpactions import sde_randers_action
from src.qpcore import Box, PreconditionError
from src.qpfields import constant
from src.qpledger import ReportLedger
from src.qpverify import (
    Event,
    EventAggregator,
    EventLevel,
    RunnerConfig,
    Suite,
    SuiteRunner,
    VerifyContext,
    error,
    info,
    warning,
)

UNIT = Box.from_bounds([-1, -1], [1, 1])


class FixedSuite(Suite):
    name = 'fixed'

    def __init__(self, levels):
        self.levels = list(levels)

    def run(self, ctx: VerifyContext) -> List[Event]:
        make = {'info': info, 'warning': warning, 'error': error}
        return [make[lvl](self.name, f"event {k}") for k, lvl in enumerate(self.levels)]


class BrokenSuite(Suite):
    name = 'broken'

    def run(self, ctx: VerifyContext) -> List[Event]:
        raise PreconditionError("nothing to check")


def context():
    return VerifyContext(sde_randers_action(constant([1.0, 0.0])), box=UNIT, seed=7)


class TestSuiteRunner:
    """Tests for SuiteRunner"""

    def test_passing_run(self):
        """INFO and WARNING events pass"""
        runner = SuiteRunner(RunnerConfig(suites=[FixedSuite(['info', 'warning'])]))
        report = runner.run(context())
        assert report.passed
        assert report.counts() == {'info': 1, 'warning': 1, 'error': 0, 'critical': 0}
        assert report.suites[0].passed
        assert report.seed == 7

    def test_error_fails(self):
        """An ERROR event fails the report and its suite"""
        runner = SuiteRunner(RunnerConfig(suites=[FixedSuite(['info']), FixedSuite(['error'])]))
        report = runner.run(context())
        assert not report.passed
        assert [s.passed for s in report.suites] == [True, False]
        assert len(report.failures()) == 1
        assert runner.stats()['violations'] == 1

    def test_suite_exception_is_critical(self):
        """A suite that cannot run yields a CRITICAL event and the run continues"""
        runner = SuiteRunner(RunnerConfig(suites=[BrokenSuite(), FixedSuite(['info'])]))
        report = runner.run(context())
        assert report.events[0].level == EventLevel.CRITICAL
        assert report.events[0].data['error_type'] == 'PreconditionError'
        assert len(report.suites) == 2
        assert not report.passed

    def test_halt_on_critical(self):
        """halt_on_critical stops after the broken suite"""
        config = RunnerConfig(suites=[BrokenSuite(), FixedSuite(['info'])], halt_on_critical=True)
        report = SuiteRunner(config).run(context())
        assert report.halted
        assert len(report.suites) == 1
        assert not report.passed

    def test_handlers(self):
        """Handlers see every event"""
        agg = EventAggregator()
        runner = SuiteRunner(RunnerConfig(suites=[FixedSuite(['info', 'error'])], handlers=[agg]))
        runner.run(context())
        assert agg.count() == 2

    def test_failing_handler_ignored(self):
        """A handler that raises does not stop the run"""
        class Exploding(EventAggregator):
            def handle(self, event):
                raise ValueError("boom")
        runner = SuiteRunner(RunnerConfig(suites=[FixedSuite(['info'])], handlers=[Exploding()]))
        assert runner.run(context()).passed

    def test_ledger(self):
        """Runs, events and summary are recorded under one parent"""
        ledger = ReportLedger()
        runner = SuiteRunner(RunnerConfig(suites=[FixedSuite(['info', 'error'])]), ledger=ledger)
        report = runner.run(context())
        ops = [e.operation for e in ledger.get_all()]
        assert ops == ['verify', 'verify.fixed', 'verify.fixed', 'verify.summary']
        assert all(e.entry_id is not None for e in report.events)
        summary = ledger.get_all()[-1]
        assert summary.passed is False
        assert summary.parent_id == 'verify-1'
        assert ledger.verify_integrity()

    def test_identical_runs(self):
        """Two runs on equal inputs give equal reports and ledger roots"""
        roots, docs = [], []
        for _ in range(2):
            ledger = ReportLedger()
            report = SuiteRunner(RunnerConfig(suites=[FixedSuite(['info', 'warning'])]), ledger).run(context())
            roots.append(ledger.root())
            docs.append(report.to_dict())
        assert roots[0] == roots[1]
        assert docs[0] == docs[1]

    def test_management(self):
        """Suites and handlers can be added; stats reset"""
        runner = SuiteRunner()
        runner.add_suite(FixedSuite(['error']))
        runner.add_handler(EventAggregator())
        runner.run(context())
        assert runner.stats()['suites'] == ['fixed']
        assert runner.stats()['handlers'] == 1
        assert runner.event_count == 1
        runner.reset()
        assert runner.event_count == 0
        assert 'SuiteRunner' in repr(runner)
