"""Split tree over ball centers.

Every node owns a contiguous slice ``perm[start:end]`` of point ids and the
tight bounding box of those points.  Internal nodes split their box at the
midpoint of its longest side (lowest dimension wins ties); points on the
hyperplane go to the low child.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba as nb
import numpy as np

from .geometry import AxisBox, GeometryError


class DuplicateCenters(GeometryError):
    pass


@nb.njit(cache=True)
def _build(points, lo, hi, left, right, parent, start, end, depth, split_dim, split_val, perm, leaf_of):
    n, d = points.shape
    stack = np.empty(2 * n + 2, dtype=np.int64)
    top = 0
    start[0] = 0
    end[0] = n
    stack[top] = 0
    top += 1
    next_id = 1
    while top > 0:
        top -= 1
        u = stack[top]
        a = start[u]
        b = end[u]
        for k in range(d):
            lo[u, k] = points[perm[a], k]
            hi[u, k] = points[perm[a], k]
        for i in range(a + 1, b):
            p = perm[i]
            for k in range(d):
                x = points[p, k]
                if x < lo[u, k]:
                    lo[u, k] = x
                if x > hi[u, k]:
                    hi[u, k] = x
        if b - a == 1:
            leaf_of[perm[a]] = u
            continue
        k = 0
        best = hi[u, 0] - lo[u, 0]
        for j in range(1, d):
            if hi[u, j] - lo[u, j] > best:
                best = hi[u, j] - lo[u, j]
                k = j
        mid = (lo[u, k] + hi[u, k]) / 2
        if mid >= hi[u, k]:
            # adjacent floats: the midpoint rounds onto the upper face
            mid = lo[u, k]
        split_dim[u] = k
        split_val[u] = mid
        i = a
        j = b - 1
        while i <= j:
            if points[perm[i], k] <= mid:
                i += 1
            else:
                tmp = perm[i]
                perm[i] = perm[j]
                perm[j] = tmp
                j -= 1
        l_id = next_id
        r_id = next_id + 1
        next_id += 2
        left[u] = l_id
        right[u] = r_id
        parent[l_id] = u
        parent[r_id] = u
        depth[l_id] = depth[u] + 1
        depth[r_id] = depth[u] + 1
        start[l_id] = a
        end[l_id] = i
        start[r_id] = i
        end[r_id] = b
        stack[top] = r_id
        top += 1
        stack[top] = l_id
        top += 1


class SplitTree:
    """Array-backed split tree; node ``0`` is the root, children have larger ids."""

    def __init__(self, centers):
        pts = np.ascontiguousarray(centers, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise GeometryError("split tree needs a nonempty (n, d) array of centers")
        if not np.all(np.isfinite(pts)):
            raise GeometryError("non-finite center coordinate")
        n, d = pts.shape
        dup = _find_duplicate(pts)
        if dup is not None:
            raise DuplicateCenters(f"centers {dup[0]} and {dup[1]} coincide")
        size = 2 * n - 1
        self.centers = pts
        self.lo = np.empty((size, d))
        self.hi = np.empty((size, d))
        self.left = np.full(size, -1, dtype=np.int32)
        self.right = np.full(size, -1, dtype=np.int32)
        self.parent = np.full(size, -1, dtype=np.int32)
        self.start = np.zeros(size, dtype=np.int32)
        self.end = np.zeros(size, dtype=np.int32)
        self.depth = np.zeros(size, dtype=np.int32)
        self.split_dim = np.full(size, -1, dtype=np.int32)
        self.split_val = np.full(size, np.nan)
        self.perm = np.arange(n, dtype=np.int32)
        self.leaf_of = np.full(n, -1, dtype=np.int32)
        _build(pts, self.lo, self.hi, self.left, self.right, self.parent, self.start,
               self.end, self.depth, self.split_dim, self.split_val, self.perm, self.leaf_of)

        self.box_center = (self.lo + self.hi) / 2
        self.l_max = (self.hi - self.lo).max(axis=1)
        self.witness_radius = (math.sqrt(d) / 2) * self.l_max
        self.size = (self.end - self.start).astype(np.int32)
        # smallest point id below each node; children always outnumber parents
        rep = np.full(size, n, dtype=np.int32)
        leaves = self.left < 0
        rep[leaves] = self.perm[self.start[leaves]]
        for u in range(size - 1, -1, -1):
            if self.left[u] >= 0:
                rep[u] = min(rep[self.left[u]], rep[self.right[u]])
        self.rep = rep

    @property
    def n(self) -> int:
        return self.centers.shape[0]

    @property
    def dim(self) -> int:
        return self.centers.shape[1]

    @property
    def node_count(self) -> int:
        return self.left.size

    @property
    def max_depth(self) -> int:
        return int(self.depth.max())

    @property
    def root(self) -> "SplitTreeNode":
        return SplitTreeNode(self, 0)

    def node(self, index: int) -> "SplitTreeNode":
        if not 0 <= index < self.node_count:
            raise IndexError(f"node {index} out of range")
        return SplitTreeNode(self, int(index))

    def leaf(self, point_id: int) -> "SplitTreeNode":
        return SplitTreeNode(self, int(self.leaf_of[point_id]))

    def point_ids(self, index: int) -> np.ndarray:
        return self.perm[self.start[index]:self.end[index]]

    def nodes(self):
        for u in range(self.node_count):
            yield SplitTreeNode(self, u)

    def materialize(self, nodes) -> tuple[np.ndarray, np.ndarray]:
        """Concatenated point ids of the given nodes, plus CSR-style offsets."""
        nodes = np.asarray(nodes, dtype=np.int64)
        lengths = self.size[nodes].astype(np.int64)
        offsets = np.zeros(nodes.size + 1, dtype=np.int64)
        np.cumsum(lengths, out=offsets[1:])
        shift = np.repeat(self.start[nodes].astype(np.int64) - offsets[:-1], lengths)
        flat = self.perm[np.arange(offsets[-1], dtype=np.int64) + shift]
        return flat, offsets

    def dump(self) -> str:
        """One line per node in preorder: indent by depth, box, point count."""
        lines = []
        stack = [0]
        while stack:
            u = stack.pop()
            box = " x ".join(f"[{a:.6g},{b:.6g}]" for a, b in zip(self.lo[u], self.hi[u]))
            lines.append(f"{'  ' * self.depth[u]}{self.depth[u]} {box} {self.size[u]}")
            if self.left[u] >= 0:
                stack.append(int(self.right[u]))
                stack.append(int(self.left[u]))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True, eq=False)
class SplitTreeNode:
    tree: SplitTree
    index: int

    def __eq__(self, other):
        return (isinstance(other, SplitTreeNode) and other.tree is self.tree
                and other.index == self.index)

    def __hash__(self):
        return hash((id(self.tree), self.index))

    def __repr__(self):
        return f"SplitTreeNode({self.index}, size={self.size})"

    @property
    def is_leaf(self) -> bool:
        return self.tree.left[self.index] < 0

    @property
    def size(self) -> int:
        return int(self.tree.size[self.index])

    @property
    def box(self) -> AxisBox:
        return AxisBox(tuple(self.tree.lo[self.index]), tuple(self.tree.hi[self.index]))

    @property
    def point_ids(self) -> np.ndarray:
        return self.tree.point_ids(self.index)

    @property
    def left(self) -> "SplitTreeNode | None":
        c = self.tree.left[self.index]
        return None if c < 0 else SplitTreeNode(self.tree, int(c))

    @property
    def right(self) -> "SplitTreeNode | None":
        c = self.tree.right[self.index]
        return None if c < 0 else SplitTreeNode(self.tree, int(c))

    @property
    def parent(self) -> "SplitTreeNode | None":
        return node_parent(self.tree, self)


def build_split_tree(centers) -> SplitTree:
    return SplitTree(centers)


def node_parent(t: SplitTree, u: SplitTreeNode) -> SplitTreeNode | None:
    if u.tree is not t:
        raise ValueError("node belongs to a different split tree")
    p = t.parent[u.index]
    return None if p < 0 else SplitTreeNode(t, int(p))


def _find_duplicate(pts: np.ndarray):
    if pts.shape[0] < 2:
        return None
    order = np.lexsort(pts.T[::-1])
    srt = pts[order]
    same = np.all(srt[1:] == srt[:-1], axis=1)
    if not same.any():
        return None
    k = int(np.argmax(same))
    i, j = sorted((int(order[k]), int(order[k + 1])))
    return i, j
