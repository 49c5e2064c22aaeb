"""
runner.py

Runs property suites against a scenario and collects their events.

The SuiteRunner hands each suite the shared VerifyContext, routes every
event through the configured handlers (and the ledger, when one is
attached) and folds the outcome into a VerifyReport. A suite that cannot
run at all (bad configuration, unmet precondition, failed evaluation)
becomes a CRITICAL event instead of aborting the run.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from src.qpcore import QuasipathError

from .context import VerifyContext
from .events import (
    Event,
    EventAggregator,
    EventHandler,
    EventLevel,
    HaltHandler,
    LedgerHandler,
    VerificationHalt,
    critical,
)
from .suites import Suite

logger = logging.getLogger(__name__)


@dataclass
class RunnerConfig:
    """
    Configuration for SuiteRunner

    Attributes:
        suites: Suites in run order
        handlers: Extra event handlers (logging, filters, ...)
        halt_on_critical: Stop at the first suite that cannot run
    """
    suites: List[Suite] = field(default_factory=list)
    handlers: List[EventHandler] = field(default_factory=list)
    halt_on_critical: bool = False


@dataclass
class SuiteSummary:
    """Outcome of one suite"""
    name: str
    params: Dict[str, Any]
    counts: Dict[str, int]

    @property
    def passed(self) -> bool:
        return self.counts.get('error', 0) == 0 and self.counts.get('critical', 0) == 0

    def to_dict(self) -> Dict[str, Any]:
        return {'name': self.name, 'params': self.params, 'counts': self.counts, 'passed': self.passed}


@dataclass
class VerifyReport:
    """
    Outcome of a verification run

    Attributes:
        events: Every event, in production order
        suites: Per-suite summaries
        seed: Seed of the context
        halted: Whether the run stopped on a critical event
    """
    events: List[Event]
    suites: List[SuiteSummary]
    seed: int
    halted: bool = False

    @property
    def passed(self) -> bool:
        return not self.halted and not any(e.level.failing for e in self.events)

    def counts(self) -> Dict[str, int]:
        return {lvl.value: sum(1 for e in self.events if e.level == lvl) for lvl in EventLevel}

    def failures(self) -> List[Event]:
        return [e for e in self.events if e.level.failing]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'passed': self.passed,
            'halted': self.halted,
            'seed': self.seed,
            'counts': self.counts(),
            'suites': [s.to_dict() for s in self.suites],
            'events': [e.to_dict() for e in self.events],
        }


class SuiteRunner:
    """
    Runs suites and escalates their events

    Example:
        from src.qpledger import ReportLedger

        ledger = ReportLedger()
        runner = SuiteRunner(RunnerConfig(suites=[build_suite('randers_agreement')]), ledger=ledger)
        report = runner.run(ctx)
        if not report.passed:
            for event in report.failures():
                print(event)
    """

    def __init__(self, config: Optional[RunnerConfig] = None, ledger=None):
        """
        Args:
            config: Runner configuration (no suites if None)
            ledger: Optional ReportLedger receiving one entry per event
        """
        self.config = config or RunnerConfig()
        self.ledger = ledger
        self.event_count = 0
        self.violation_count = 0
        self._ledger_handler: Optional[LedgerHandler] = None

    def run(self, ctx: VerifyContext) -> VerifyReport:
        """
        Run every configured suite on ctx

        Raises:
            VerificationHalt: Never; a halt ends the run and is reported
        """
        parent_id = None
        if self.ledger is not None:
            parent = self.ledger.append('verify', {'seed': ctx.seed,
                                                   'suites': [s.name for s in self.config.suites]})
            parent_id = parent.entry_id
            self._ledger_handler = LedgerHandler(self.ledger, parent_id)

        events: List[Event] = []
        summaries: List[SuiteSummary] = []
        halted = False
        for suite in self.config.suites:
            collector = EventAggregator()
            try:
                for event in self._run_suite(suite, ctx):
                    collector.handle(event)
                    self.escalate(event)
            except VerificationHalt as exc:
                logger.error("Verification halted: %s", exc)
                halted = True
            events.extend(collector.get_events())
            summaries.append(SuiteSummary(suite.name, suite.params(), collector.counts()))
            if halted:
                break

        report = VerifyReport(events, summaries, ctx.seed, halted)
        if self.ledger is not None:
            self.ledger.append('verify.summary', {k: v for k, v in report.to_dict().items() if k != 'events'},
                               passed=report.passed, parent_id=parent_id)
            self._ledger_handler = None
        logger.info("verify: %d suites, %s, %s", len(summaries), report.counts(),
                    'passed' if report.passed else 'FAILED')
        return report

    def _run_suite(self, suite: Suite, ctx: VerifyContext) -> List[Event]:
        logger.info("Running suite %s", suite.name)
        try:
            return suite.run(ctx)
        except QuasipathError as exc:
            logger.debug("Suite %s could not run", suite.name, exc_info=True)
            return [critical(suite.name, f"suite could not run: {exc}", error_type=type(exc).__name__)]

    def escalate(self, event: Event) -> None:
        """
        Process an event through the ledger and the handlers

        Raises:
            VerificationHalt: CRITICAL event with halt_on_critical set
        """
        self.event_count += 1
        if event.level.failing:
            self.violation_count += 1
        if self._ledger_handler is not None:
            self._ledger_handler.handle(event)
        for handler in self.config.handlers:
            if handler.should_handle(event):
                try:
                    handler.handle(event)
                except VerificationHalt:
                    raise
                except Exception:
                    logger.exception("Handler %s failed", handler.__class__.__name__)
        if self.config.halt_on_critical and event.level == EventLevel.CRITICAL:
            HaltHandler().handle(event)

    def stats(self) -> Dict[str, Any]:
        return {
            'total_events': self.event_count,
            'violations': self.violation_count,
            'suites': [s.name for s in self.config.suites],
            'handlers': len(self.config.handlers),
            'halt_on_critical': self.config.halt_on_critical,
        }

    def reset(self) -> None:
        self.event_count = 0
        self.violation_count = 0

    def add_suite(self, suite: Suite) -> None:
        self.config.suites.append(suite)

    def add_handler(self, handler: EventHandler) -> None:
        self.config.handlers.append(handler)

    def __repr__(self) -> str:
        return (
            f"SuiteRunner(suites={len(self.config.suites)}, "
            f"handlers={len(self.config.handlers)}, "
            f"events={self.event_count}, "
            f"violations={self.violation_count})"
        )
