"""
events.py

Diagnostic events raised by the verification suites.

An event records what a suite found (a passed check, a soft warning, a
violated property) with a severity level and the numbers behind it.
Events carry no wall-clock time: their order is the order in which the
runner produced them, so reports of identical runs are identical.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional

from src.qpcore import QuasipathError

logger = logging.getLogger(__name__)

_ORDER = ('info', 'warning', 'error', 'critical')


class EventLevel(Enum):
    """Event severity levels"""
    INFO = "info"           # check held
    WARNING = "warning"     # check held with a caveat
    ERROR = "error"         # property violated
    CRITICAL = "critical"   # suite could not run

    def __lt__(self, other: 'EventLevel') -> bool:
        return _ORDER.index(self.value) < _ORDER.index(other.value)

    def __le__(self, other: 'EventLevel') -> bool:
        return self == other or self < other

    @property
    def failing(self) -> bool:
        return self in (EventLevel.ERROR, EventLevel.CRITICAL)

    @property
    def log_level(self) -> int:
        return {'info': logging.INFO, 'warning': logging.WARNING,
                'error': logging.ERROR, 'critical': logging.CRITICAL}[self.value]


class VerificationHalt(QuasipathError, RuntimeError):
    """Raised by HaltHandler on critical events"""

    def __init__(self, event: 'Event'):
        super().__init__(f"Critical event in {event.operation}: {event.message}")
        self.event = event


@dataclass
class Event:
    """
    Verification event

    Attributes:
        level: Severity
        operation: Suite (or check) that produced the event
        message: Human-readable description
        data: Numbers behind the verdict, tolerances and seeds included
        entry_id: Ledger entry of the event, once logged
    """
    level: EventLevel
    operation: str
    message: str
    data: Dict[str, Any] = field(default_factory=dict)
    entry_id: Optional[str] = None

    def __str__(self) -> str:
        return f"[{self.level.value.upper()}] {self.operation}: {self.message}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            'level': self.level.value,
            'operation': self.operation,
            'message': self.message,
            'data': self.data,
            'entry_id': self.entry_id,
        }


def info(operation: str, message: str, **data) -> Event:
    return Event(EventLevel.INFO, operation, message, data)


def warning(operation: str, message: str, **data) -> Event:
    return Event(EventLevel.WARNING, operation, message, data)


def error(operation: str, message: str, **data) -> Event:
    return Event(EventLevel.ERROR, operation, message, data)


def critical(operation: str, message: str, **data) -> Event:
    return Event(EventLevel.CRITICAL, operation, message, data)


class EventHandler:
    """
    Base class for event handlers

    Example:
        class PrintHandler(EventHandler):
            def handle(self, event: Event) -> None:
                print(event)
    """

    def handle(self, event: Event) -> None:
        pass

    def should_handle(self, event: Event) -> bool:
        return True


class LogHandler(EventHandler):
    """Writes events through logging at the matching level"""

    def __init__(self, name: str = 'quasipath.verify', min_level: EventLevel = EventLevel.INFO):
        self.logger = logging.getLogger(name)
        self.min_level = min_level

    def should_handle(self, event: Event) -> bool:
        return self.min_level <= event.level

    def handle(self, event: Event) -> None:
        self.logger.log(event.level.log_level, "%s", event)


class LedgerHandler(EventHandler):
    """Appends every event to a ReportLedger"""

    def __init__(self, ledger, parent_id: Optional[str] = None):
        """
        Args:
            ledger: ReportLedger
            parent_id: Entry the events hang under (e.g. the verify run)
        """
        self.ledger = ledger
        self.parent_id = parent_id

    def handle(self, event: Event) -> None:
        entry = self.ledger.append(
            operation=f"verify.{event.operation}",
            report=event.to_dict(),
            passed=not event.level.failing,
            parent_id=self.parent_id,
        )
        event.entry_id = entry.entry_id


class HaltHandler(EventHandler):
    """Stops the run on critical events"""

    def should_handle(self, event: Event) -> bool:
        return event.level == EventLevel.CRITICAL

    def handle(self, event: Event) -> None:
        raise VerificationHalt(event)


class EventAggregator(EventHandler):
    """Collects events for later analysis"""

    def __init__(self):
        self.events: List[Event] = []

    def handle(self, event: Event) -> None:
        self.events.append(event)

    def get_events(self, level: Optional[EventLevel] = None) -> List[Event]:
        if level is None:
            return self.events.copy()
        return [e for e in self.events if e.level == level]

    def count(self, level: Optional[EventLevel] = None) -> int:
        return len(self.get_events(level))

    def counts(self) -> Dict[str, int]:
        return {lvl.value: self.count(lvl) for lvl in EventLevel}

    def clear(self) -> None:
        self.events.clear()


class ConditionalHandler(EventHandler):
    """Wraps another handler behind a predicate"""

    def __init__(self, handler: EventHandler, condition: Callable[[Event], bool]):
        self.handler = handler
        self.condition = condition

    def should_handle(self, event: Event) -> bool:
        return self.condition(event)

    def handle(self, event: Event) -> None:
        self.handler.handle(event)
