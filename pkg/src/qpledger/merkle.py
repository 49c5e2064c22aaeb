"""
merkle.py

Merkle tree over report hashes.

Leaves are hex SHA-256 digests. Parents hash the concatenation of their
children's hex strings; an unpaired node at the end of a level is paired
with itself. The root of an empty tree is sha256(b'').
"""

import hashlib
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

EMPTY_ROOT = hashlib.sha256(b'').hexdigest()


def _parent(left: str, right: str) -> str:
    return hashlib.sha256((left + right).encode()).hexdigest()


def _next_level(level: List[str]) -> List[str]:
    pairs = zip(level[0::2], level[1::2] + ([level[-1]] if len(level) % 2 else []))
    return [_parent(l, r) for l, r in pairs]


@dataclass
class MerkleProof:
    """
    Inclusion proof of one leaf

    Attributes:
        leaf_hash: Leaf digest
        path: (sibling digest, side) pairs from the leaf up; side is
            'left' when the sibling is the left child
        root: Root the proof should reproduce
    """
    leaf_hash: str
    path: List[Tuple[str, str]] = field(default_factory=list)
    root: str = EMPTY_ROOT

    def verify(self) -> bool:
        current = self.leaf_hash
        for sibling, side in self.path:
            current = _parent(sibling, current) if side == 'left' else _parent(current, sibling)
        return current == self.root

    def to_dict(self):
        return {'leaf_hash': self.leaf_hash, 'path': [list(p) for p in self.path], 'root': self.root}


class MerkleTree:
    """
    Append-only Merkle tree

    Example:
        tree = MerkleTree()
        tree.append(entry.hash())
        proof = tree.generate_proof(0)
        assert proof.verify()
    """

    def __init__(self, leaves: Optional[List[str]] = None):
        self.leaves: List[str] = list(leaves or [])
        self._root: Optional[str] = None

    def append(self, leaf_hash: str) -> None:
        self.leaves.append(leaf_hash)
        self._root = None

    def levels(self) -> List[List[str]]:
        """All levels, leaves first and the root level last"""
        out = [self.leaves[:]]
        while len(out[-1]) > 1:
            out.append(_next_level(out[-1]))
        return out

    def root(self) -> str:
        if self._root is None:
            self._root = self.levels()[-1][0] if self.leaves else EMPTY_ROOT
        return self._root

    def generate_proof(self, index: int) -> MerkleProof:
        """
        Inclusion proof for the leaf at index

        Raises:
            IndexError: index out of range
        """
        if not 0 <= index < len(self.leaves):
            raise IndexError(f"Index {index} out of range [0, {len(self.leaves)})")
        leaf = self.leaves[index]
        path = []
        for level in self.levels()[:-1]:
            if index % 2:
                path.append((level[index - 1], 'left'))
            else:
                sibling = level[index + 1] if index + 1 < len(level) else level[index]
                path.append((sibling, 'right'))
            index //= 2
        return MerkleProof(leaf, path, self.root())

    def __len__(self) -> int:
        return len(self.leaves)

    def __repr__(self) -> str:
        return f"MerkleTree(leaves={len(self.leaves)}, root={self.root()[:16]}...)"
