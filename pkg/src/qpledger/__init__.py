"""
qpledger: Report ledger for quasipath runs

Layer 8 of quasipath.

Every numeric report a run produces is appended to an append-only
ledger with a monotonic counter, a deterministic id, a SHA-256 digest of
its canonical JSON and a Merkle root over all digests. Nothing
time-dependent enters an entry, so a scenario run twice with the same
seed gives byte-identical ledgers.
"""

from .canonical import to_jsonable, canonical_json, pretty_json, write_json
from .merkle import EMPTY_ROOT, MerkleProof, MerkleTree
from .ledger import LedgerEntry, ReportLedger

__all__ = [
    'to_jsonable',
    'canonical_json',
    'pretty_json',
    'write_json',
    'EMPTY_ROOT',
    'MerkleProof',
    'MerkleTree',
    'LedgerEntry',
    'ReportLedger',
]

__version__ = '0.1.0'
__layer__ = 8
