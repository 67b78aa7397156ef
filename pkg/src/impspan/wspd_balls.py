"""WSPD for pairwise-disjoint balls.

The centers get a point WSPD at separation 3s+6.  Pairs whose sides are both
singletons or both plural are kept as they are.  A mixed pair (one ball
against a cluster) is re-tested against the ball's radius, and the cluster is
split down the tree until every piece passes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba as nb
import numpy as np

from .geometry import (BallSet, as_ball_set, bounding_box, enclosing_ball,
                       require_disjoint, unit_ball_volume_coeff)
from .pairsets import PairSets
from .splittree import SplitTree, SplitTreeNode
from .wspd_points import _separated

DIRECT = 0
PARTITIONED = 1
CATEGORY_NAMES = ("direct", "partitioned")

MODE_COUNT = 0
MODE_NODES = 1
MODE_EDGES = 2

# stats slots filled by the kernel
ST_POINT_PAIRS = 0
ST_MIXED = 1
ST_SPLIT = 2
ST_DIRECT = 3
ST_PARTITIONED = 4
ST_RADIUS_CHECKS = 5
ST_RADIUS_VIOLATIONS = 6
N_STATS = 7


@nb.njit(cache=True, inline="always")
def _singleton_separated(ball_c, k, rk, w, left, center, rho, s):
    if left[w] < 0:
        return True
    dist = 0.0
    for j in range(center.shape[1]):
        diff = ball_c[k, j] - center[w, j]
        dist += diff * diff
    return math.sqrt(dist) - rho[w] - rk >= (3 * s + 4) * rho[w]


@nb.njit(cache=True, inline="always")
def _emit(m, a, b, cat, rep, mode, out_a, out_b, out_cat):
    if mode == MODE_NODES:
        out_a[m] = a
        out_b[m] = b
        out_cat[m] = cat
    elif mode == MODE_EDGES:
        x = rep[a]
        y = rep[b]
        if x < y:
            out_a[m] = x
            out_b[m] = y
        else:
            out_a[m] = y
            out_b[m] = x
    return m + 1


@nb.njit(cache=True)
def _find_pairs(v, w, m, left, right, center, rho, rep, ball_c, ball_r, s,
                mode, out_a, out_b, out_cat, stack, stats):
    k = rep[v]
    rk = ball_r[k]
    if _singleton_separated(ball_c, k, rk, w, left, center, rho, s):
        stats[ST_DIRECT] += 1
        return _emit(m, v, w, DIRECT, rep, mode, out_a, out_b, out_cat)
    stats[ST_SPLIT] += 1
    stats[ST_RADIUS_CHECKS] += 1
    if not rk > 2 * rho[w]:
        stats[ST_RADIUS_VIOLATIONS] += 1
    stack[0] = right[w]
    stack[1] = left[w]
    top = 2
    while top > 0:
        top -= 1
        u = stack[top]
        if _singleton_separated(ball_c, k, rk, u, left, center, rho, s):
            stats[ST_PARTITIONED] += 1
            m = _emit(m, v, u, PARTITIONED, rep, mode, out_a, out_b, out_cat)
        else:
            stats[ST_RADIUS_CHECKS] += 1
            if not rk > 2 * rho[u]:
                stats[ST_RADIUS_VIOLATIONS] += 1
            stack[top] = right[u]
            stack[top + 1] = left[u]
            top += 2
    return m


@nb.njit(cache=True)
def _ball_wspd(left, right, center, rho, rep, ball_c, ball_r, node_r, s, max_depth,
               mode, out_a, out_b, out_cat, stats):
    s_points = 3 * s + 6
    factor = 3 * s + 4
    d = center.shape[1]
    stack_a = np.empty(4 * max_depth + 8, dtype=np.int64)
    stack_b = np.empty(4 * max_depth + 8, dtype=np.int64)
    fp_stack = np.empty(2 * max_depth + 4, dtype=np.int64)
    m = 0
    # hot counters stay in locals; find_pairs bumps stats itself
    point_pairs = 0
    mixed = 0
    direct = 0
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
            if _separated(center, rho, a, b, s_points):
                point_pairs += 1
                a_leaf = left[a] < 0
                b_leaf = left[b] < 0
                if a_leaf != b_leaf:
                    mixed += 1
                    if b_leaf:
                        a, b = b, a
                    # a leaf's box center is its ball center; most mixed pairs pass here
                    dist = 0.0
                    for j in range(d):
                        diff = center[a, j] - center[b, j]
                        dist += diff * diff
                    if not math.sqrt(dist) - rho[b] - node_r[a] >= factor * rho[b]:
                        m = _find_pairs(a, b, m, left, right, center, rho, rep, ball_c,
                                        ball_r, s, mode, out_a, out_b, out_cat, fp_stack, stats)
                        continue
                direct += 1
                # written out rather than calling _emit: passing the output
                # arrays on every pair costs more than the traversal itself
                if mode == MODE_NODES:
                    out_a[m] = a
                    out_b[m] = b
                    out_cat[m] = DIRECT
                elif mode == MODE_EDGES:
                    x = rep[a]
                    y = rep[b]
                    out_a[m] = min(x, y)
                    out_b[m] = max(x, y)
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
    stats[ST_POINT_PAIRS] += point_pairs
    stats[ST_MIXED] += mixed
    stats[ST_DIRECT] += direct
    return m


def _run(tree: SplitTree, balls: BallSet, s: float, mode: int, out_a, out_b, out_cat):
    stats = np.zeros(N_STATS, dtype=np.int64)
    node_r = np.zeros(tree.node_count)
    node_r[tree.leaf_of] = balls.radii
    m = _ball_wspd(tree.left, tree.right, tree.box_center, tree.witness_radius, tree.rep,
                   balls.centers, balls.radii, node_r, float(s), tree.max_depth, mode,
                   out_a, out_b, out_cat, stats)
    return m, stats


def _stats_dict(stats) -> dict:
    return {
        "point_pairs": int(stats[ST_POINT_PAIRS]),
        "mixed_pairs": int(stats[ST_MIXED]),
        "split_pairs": int(stats[ST_SPLIT]),
        "direct": int(stats[ST_DIRECT]),
        "partitioned": int(stats[ST_PARTITIONED]),
        "radius_checks": int(stats[ST_RADIUS_CHECKS]),
        "radius_violations": int(stats[ST_RADIUS_VIOLATIONS]),
    }


@dataclass(frozen=True)
class BallPair:
    a: frozenset
    b: frozenset
    category: str = "direct"


@dataclass(frozen=True, eq=False)
class BallWspd:
    """Ball WSPD with both sides stored as split-tree nodes.

    Partitioned pairs are (leaf, node) as well, so ``a``/``b`` index
    ``tree`` for every pair.
    """

    balls: BallSet
    s: float
    tree: SplitTree
    a: np.ndarray
    b: np.ndarray
    category: np.ndarray
    stats: dict = field(default_factory=dict)

    def __len__(self):
        return self.a.size

    @property
    def size(self) -> int:
        return self.a.size

    @property
    def pairs(self) -> list[BallPair]:
        t = self.tree
        return [BallPair(frozenset(t.point_ids(x).tolist()), frozenset(t.point_ids(y).tolist()),
                         CATEGORY_NAMES[c])
                for x, y, c in zip(self.a, self.b, self.category)]

    def id_sets(self) -> PairSets:
        a_ids, a_off = self.tree.materialize(self.a)
        b_ids, b_off = self.tree.materialize(self.b)
        return PairSets(a_ids, a_off, b_ids, b_off)

    def partitioned_multiplicity(self) -> np.ndarray:
        """How often each split-tree node occurs as the set side of a partitioned pair."""
        sel = self.category == PARTITIONED
        return np.bincount(self.b[sel], minlength=self.tree.node_count)


def packing_bound(s: float, d: int) -> float:
    """(3s+9)^d * Gamma(d/2+1) / pi^(d/2)."""
    if s <= 0:
        raise ValueError("separation must be positive")
    return (3 * s + 9) ** d / unit_ball_volume_coeff(d)


def singleton_separation_test(balls, k: int, w: SplitTreeNode, s: float) -> bool:
    """Whether ball k is s-separated from the balls centered in node w."""
    bs = as_ball_set(balls)
    t = w.tree
    return bool(_singleton_separated(bs.centers, int(k), bs.radii[k], w.index, t.left,
                                     t.box_center, t.witness_radius, float(s)))


def find_pairs(t: SplitTree, balls, v: SplitTreeNode, w: SplitTreeNode, s: float) -> list[BallPair]:
    if v.tree is not t or w.tree is not t:
        raise ValueError("nodes belong to a different split tree")
    if not v.is_leaf:
        raise ValueError("first node must be a leaf")
    bs = as_ball_set(balls)
    if np.intersect1d(v.point_ids, w.point_ids).size:
        raise ValueError("nodes overlap")
    cap = w.size
    out_a = np.empty(cap, dtype=np.int32)
    out_b = np.empty(cap, dtype=np.int32)
    out_cat = np.empty(cap, dtype=np.int8)
    stats = np.zeros(N_STATS, dtype=np.int64)
    stack = np.empty(2 * t.max_depth + 4, dtype=np.int64)
    m = _find_pairs(v.index, w.index, 0, t.left, t.right, t.box_center, t.witness_radius,
                    t.rep, bs.centers, bs.radii, float(s), MODE_NODES, out_a, out_b,
                    out_cat, stack, stats)
    return [BallPair(frozenset(t.point_ids(x).tolist()), frozenset(t.point_ids(y).tolist()),
                     CATEGORY_NAMES[c])
            for x, y, c in zip(out_a[:m], out_b[:m], out_cat[:m])]


def compute_ball_wspd(balls, s: float, check_disjoint: bool = True) -> BallWspd:
    if s <= 0:
        raise ValueError("separation must be positive")
    bs = as_ball_set(balls)
    if check_disjoint:
        require_disjoint(bs)
    tree = SplitTree(bs.centers)
    empty32 = np.empty(0, dtype=np.int32)
    m, _ = _run(tree, bs, s, MODE_COUNT, empty32, empty32, np.empty(0, dtype=np.int8))
    a = np.empty(m, dtype=np.int32)
    b = np.empty(m, dtype=np.int32)
    cat = np.empty(m, dtype=np.int8)
    _, stats = _run(tree, bs, s, MODE_NODES, a, b, cat)
    return BallWspd(bs, float(s), tree, a, b, cat, _stats_dict(stats))


def ball_wspd_edges(balls: BallSet, s: float, tree: SplitTree | None = None):
    """Representative edges (min id per side) of the ball WSPD, without keeping the pairs."""
    tree = tree if tree is not None else SplitTree(balls.centers)
    empty32 = np.empty(0, dtype=np.int32)
    m, _ = _run(tree, balls, s, MODE_COUNT, empty32, empty32, np.empty(0, dtype=np.int8))
    edges = np.empty((2, m), dtype=np.int32)
    _, stats = _run(tree, balls, s, MODE_EDGES, edges[0], edges[1], np.empty(0, dtype=np.int8))
    return edges.T, _stats_dict(stats)


def ball_pair_well_separated(pair, balls, s: float) -> bool:
    """Evaluate the four-case separation rule for ball sets from raw centers."""
    bs = as_ball_set(balls)
    a, b = (sorted(pair.a), sorted(pair.b)) if isinstance(pair, BallPair) else map(sorted, pair)
    if not a or not b or set(a) & set(b):
        raise ValueError("pair sides must be nonempty and disjoint")
    if len(a) == 1 and len(b) == 1:
        return True
    if len(a) > 1 and len(b) == 1:
        a, b = b, a
    if len(a) == 1:
        k = a[0]
        cb = enclosing_ball(bounding_box(bs.centers[b]))
        gap = math.dist(bs.centers[k], cb.center) - cb.radius - bs.radii[k]
        return bool(gap >= (3 * s + 4) * cb.radius)
    ca = enclosing_ball(bounding_box(bs.centers[a]))
    cb = enclosing_ball(bounding_box(bs.centers[b]))
    rho = max(ca.radius, cb.radius)
    return bool(math.dist(ca.center, cb.center) - 2 * rho >= (3 * s + 4) * rho)
