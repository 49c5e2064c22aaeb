"""
QPVerify: property suites for scenarios

Layer 8 of the quasipath stack. Checks the properties the other layers
promise (zero-cost flowlines, the drift lower bound, the key estimate,
descent by bending, separatrix hitting, admissibility, Legendre duality
and the Randers closed form) on sampled inputs of a scenario.

"Failure is allowed. Lying about failure is not."

Every suite reports the tolerances and seeds it used, and every event can
be recorded in a ReportLedger.
"""

from .events import (
    EventLevel,
    Event,
    VerificationHalt,
    EventHandler,
    LogHandler,
    LedgerHandler,
    HaltHandler,
    EventAggregator,
    ConditionalHandler,
    info,
    warning,
    error,
    critical,
)
from .context import VerifyContext
from .suites import (
    Suite,
    FlowlineZeroCost,
    DriftLowerBound,
    KeyEstimate,
    DescentDirection,
    HittingReportSuite,
    Admissibility,
    LegendrePointwise,
    RandersAgreement,
    SUITES,
    available_suites,
    build_suite,
)
from .runner import RunnerConfig, SuiteSummary, VerifyReport, SuiteRunner

__all__ = [
    'EventLevel',
    'Event',
    'VerificationHalt',
    'EventHandler',
    'LogHandler',
    'LedgerHandler',
    'HaltHandler',
    'EventAggregator',
    'ConditionalHandler',
    'info',
    'warning',
    'error',
    'critical',
    'VerifyContext',
    'Suite',
    'FlowlineZeroCost',
    'DriftLowerBound',
    'KeyEstimate',
    'DescentDirection',
    'HittingReportSuite',
    'Admissibility',
    'LegendrePointwise',
    'RandersAgreement',
    'SUITES',
    'available_suites',
    'build_suite',
    'RunnerConfig',
    'SuiteSummary',
    'VerifyReport',
    'SuiteRunner',
]

__version__ = '0.1.0'
__layer__ = 8
