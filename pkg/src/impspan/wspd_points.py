"""Well-separated pair decomposition of the centers stored in a split tree."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba as nb
import numpy as np

from .pairsets import PairSets
from .splittree import SplitTree, SplitTreeNode


@nb.njit(cache=True, inline="always")
def _separated(center, rho, a, b, s):
    r = max(rho[a], rho[b])
    dist = 0.0
    for k in range(center.shape[1]):
        diff = center[a, k] - center[b, k]
        dist += diff * diff
    return math.sqrt(dist) - 2 * r >= s * r


@nb.njit(cache=True)
def _point_wspd(left, right, center, rho, s, max_depth, out_a, out_b, fill):
    stack_a = np.empty(4 * max_depth + 8, dtype=np.int64)
    stack_b = np.empty(4 * max_depth + 8, dtype=np.int64)
    m = 0
    for u in range(left.size):
        if left[u] < 0:
            continue
        top = 1
        stack_a[0] = left[u]
        stack_b[0] = right[u]
        while top > 0:
            top -= 1
            a = stack_a[top]
            b = stack_b[top]
            if _separated(center, rho, a, b, s):
                if fill:
                    out_a[m] = a
                    out_b[m] = b
                m += 1
            elif rho[a] >= rho[b]:
                stack_a[top] = right[a]
                stack_b[top] = b
                stack_a[top + 1] = left[a]
                stack_b[top + 1] = b
                top += 2
            else:
                stack_a[top] = a
                stack_b[top] = right[b]
                stack_a[top + 1] = a
                stack_b[top + 1] = left[b]
                top += 2
    return m


@dataclass(frozen=True)
class NodePair:
    a: SplitTreeNode
    b: SplitTreeNode


@dataclass(frozen=True, eq=False)
class PointWspd:
    tree: SplitTree
    s: float
    a: np.ndarray
    b: np.ndarray

    def __len__(self):
        return self.a.size

    @property
    def pairs(self) -> list[NodePair]:
        return [NodePair(self.tree.node(int(x)), self.tree.node(int(y)))
                for x, y in zip(self.a, self.b)]

    def id_sets(self) -> PairSets:
        a_ids, a_off = self.tree.materialize(self.a)
        b_ids, b_off = self.tree.materialize(self.b)
        return PairSets(a_ids, a_off, b_ids, b_off)


def nodes_well_separated(a: SplitTreeNode, b: SplitTreeNode, s: float) -> bool:
    """Equal-radius witness balls around both boxes are at least s*radius apart."""
    if s <= 0:
        raise ValueError("separation must be positive")
    if a.tree is not b.tree:
        raise ValueError("nodes belong to different trees")
    t = a.tree
    return bool(_separated(t.box_center, t.witness_radius, a.index, b.index, float(s)))


def compute_point_wspd(t: SplitTree, s: float) -> PointWspd:
    if s <= 0:
        raise ValueError("separation must be positive")
    args = (t.left, t.right, t.box_center, t.witness_radius, float(s), t.max_depth)
    empty = np.empty(0, dtype=np.int32)
    m = _point_wspd(*args, empty, empty, False)
    a = np.empty(m, dtype=np.int32)
    b = np.empty(m, dtype=np.int32)
    _point_wspd(*args, a, b, True)
    return PointWspd(t, float(s), a, b)
