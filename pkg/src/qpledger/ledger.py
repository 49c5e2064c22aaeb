"""
ledger.py

Append-only ledger of numeric reports.

Every report a run produces (an action value, a minimization, a verdict
table, a suite outcome) is appended as an entry. Entries carry a
monotonic counter instead of a wall-clock time and a deterministic id
"<operation>-<counter>", so two runs of the same scenario with the same
seed produce identical ledgers. Each entry hash is the SHA-256 digest of
its canonical JSON; the ledger root is the Merkle root over those hashes.
"""

import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from src.qpcore import ConfigError

from .canonical import canonical_json, to_jsonable, write_json
from .merkle import MerkleProof, MerkleTree

logger = logging.getLogger(__name__)


@dataclass
class LedgerEntry:
    """
    Single report entry

    Attributes:
        counter: Monotonic position (1-based)
        entry_id: "<operation>-<counter>"
        parent_id: Entry this one derives from (e.g. a suite run and its events)
        operation: Producing operation (minimize, criteria, verify.key_estimate, ...)
        report: JSON-native report dictionary
        passed: Whether the report's checks held
    """
    counter: int
    entry_id: str
    parent_id: Optional[str]
    operation: str
    report: Dict[str, Any] = field(default_factory=dict)
    passed: bool = True

    def to_dict(self) -> Dict[str, Any]:
        return {
            'counter': self.counter,
            'entry_id': self.entry_id,
            'parent_id': self.parent_id,
            'operation': self.operation,
            'report': self.report,
            'passed': self.passed,
        }

    def to_json(self) -> str:
        return canonical_json(self.to_dict())

    def hash(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'LedgerEntry':
        try:
            return cls(int(data['counter']), str(data['entry_id']), data.get('parent_id'),
                       str(data['operation']), dict(data.get('report', {})), bool(data.get('passed', True)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"Malformed ledger entry: {exc}") from exc


class ReportLedger:
    """
    Append-only report ledger

    Example:
        ledger = ReportLedger()
        run = ledger.append('minimize', result.to_dict(), passed=result.converged)
        ledger.append('verify.hitting_report', report.to_dict(), parent_id=run.entry_id)
        assert ledger.verify_integrity()
        ledger.write(out_dir / 'ledger.json')
    """

    def __init__(self):
        self._entries: List[LedgerEntry] = []
        self._index: Dict[str, LedgerEntry] = {}
        self.merkle = MerkleTree()
        self._counter = 0
        self._stored_root: Optional[str] = None

    def append(self, operation: str, report: Any, passed: bool = True,
               parent_id: Optional[str] = None) -> LedgerEntry:
        """
        Append a report

        Args:
            operation: Producing operation
            report: Dictionary (or object with to_dict) made JSON-native on entry
            passed: Outcome of the report's checks
            parent_id: Id of the entry this one derives from

        Raises:
            ConfigError: parent_id unknown
        """
        if parent_id is not None and parent_id not in self._index:
            raise ConfigError(f"Unknown parent entry {parent_id!r}")
        self._counter += 1
        entry = LedgerEntry(self._counter, f"{operation}-{self._counter}", parent_id,
                            operation, to_jsonable(report), bool(passed))
        self._add(entry)
        logger.debug("ledger: appended %s (passed=%s)", entry.entry_id, entry.passed)
        return entry

    def _add(self, entry: LedgerEntry) -> None:
        self._entries.append(entry)
        self._index[entry.entry_id] = entry
        self.merkle.append(entry.hash())

    def get(self, entry_id: str) -> Optional[LedgerEntry]:
        return self._index.get(entry_id)

    def trace(self, entry_id: str) -> List[LedgerEntry]:
        """Chain of entries from the root ancestor down to entry_id"""
        chain = []
        current = self._index.get(entry_id)
        while current is not None:
            chain.append(current)
            current = self._index.get(current.parent_id) if current.parent_id else None
        return list(reversed(chain))

    def root(self) -> str:
        return self.merkle.root()

    def proof(self, entry_id: str) -> MerkleProof:
        """
        Raises:
            KeyError: Unknown entry
        """
        entry = self._index[entry_id]
        return self.merkle.generate_proof(entry.counter - 1)

    def verify_integrity(self) -> bool:
        """
        Recompute the chain

        Checks that counters run 1, 2, 3, ..., that ids match their
        counters, that parents precede children, and that the Merkle root
        over freshly computed hashes equals the recorded root.
        """
        seen = set()
        for k, entry in enumerate(self._entries, start=1):
            if entry.counter != k or entry.entry_id != f"{entry.operation}-{k}":
                logger.warning("ledger: entry %d out of sequence (%s)", k, entry.entry_id)
                return False
            if entry.parent_id is not None and entry.parent_id not in seen:
                logger.warning("ledger: %s precedes its parent %s", entry.entry_id, entry.parent_id)
                return False
            seen.add(entry.entry_id)
        recomputed = MerkleTree([e.hash() for e in self._entries]).root()
        expected = self._stored_root if self._stored_root is not None else self.merkle.root()
        if recomputed != expected:
            logger.warning("ledger: Merkle root mismatch")
            return False
        return True

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self._entries)

    def get_all(self) -> List[LedgerEntry]:
        return list(self._entries)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'entries': [e.to_dict() for e in self._entries],
            'root': self.root(),
            'count': len(self._entries),
        }

    def write(self, path) -> Path:
        return write_json(self.to_dict(), path)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ReportLedger':
        """
        Rebuild a ledger from its document; verify_integrity then checks
        the entries against the stored root.
        """
        ledger = cls()
        for raw in data.get('entries', []):
            entry = LedgerEntry.from_dict(raw)
            ledger._add(entry)
            ledger._counter = max(ledger._counter, entry.counter)
        ledger._stored_root = data.get('root')
        return ledger

    @classmethod
    def read(cls, path) -> 'ReportLedger':
        """
        Load a ledger.json document

        Raises:
            OSError: Unreadable file
            ConfigError: Not a ledger document
        """
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not a ledger document ({exc})") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: not a ledger document")
        return cls.from_dict(data)

    def __len__(self) -> int:
        return len(self._entries)

    def __repr__(self) -> str:
        return f"ReportLedger(entries={len(self)}, root={self.root()[:16]}...)"
