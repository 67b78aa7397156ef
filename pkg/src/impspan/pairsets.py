"""Explicit id-set pairs in CSR layout.

Pair ``k`` has side A ``a_ids[a_off[k]:a_off[k+1]]`` and side B
``b_ids[b_off[k]:b_off[k+1]]``.  This is what the verification oracles
consume; it carries no tree structure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class PairSets:
    a_ids: np.ndarray
    a_off: np.ndarray
    b_ids: np.ndarray
    b_off: np.ndarray

    @classmethod
    def from_sets(cls, pairs) -> "PairSets":
        pairs = [(list(a), list(b)) for a, b in pairs]
        a_len = [len(a) for a, _ in pairs]
        b_len = [len(b) for _, b in pairs]
        a_ids = np.array([i for a, _ in pairs for i in a], dtype=np.int64)
        b_ids = np.array([i for _, b in pairs for i in b], dtype=np.int64)
        return cls(a_ids, _offsets(a_len), b_ids, _offsets(b_len))

    def __len__(self):
        return self.a_off.size - 1

    @property
    def a_sizes(self) -> np.ndarray:
        return np.diff(self.a_off)

    @property
    def b_sizes(self) -> np.ndarray:
        return np.diff(self.b_off)

    def pair(self, k: int) -> tuple[np.ndarray, np.ndarray]:
        return (self.a_ids[self.a_off[k]:self.a_off[k + 1]],
                self.b_ids[self.b_off[k]:self.b_off[k + 1]])

    def __iter__(self):
        for k in range(len(self)):
            yield self.pair(k)

    def as_sets(self) -> list[tuple[frozenset, frozenset]]:
        return [(frozenset(a.tolist()), frozenset(b.tolist())) for a, b in self]


def _offsets(lengths) -> np.ndarray:
    off = np.zeros(len(lengths) + 1, dtype=np.int64)
    np.cumsum(lengths, out=off[1:])
    return off
