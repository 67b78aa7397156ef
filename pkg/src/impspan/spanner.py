"""Imprecise t-spanners for disjoint balls, precise instances and dilation."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import dijkstra

from .geometry import BallSet, GeometryError, as_ball_set, require_disjoint
from .splittree import SplitTree
from .wspd_balls import ball_wspd_edges

STRATEGIES = ("centers", "uniform-random", "boundary-random")
_ALIASES = {"uniform": "uniform-random", "boundary": "boundary-random"}


def separation_for_stretch(t: float) -> float:
    if not t > 1:
        raise ValueError(f"stretch factor must exceed 1, got {t}")
    return 4 * (t + 1) / (t - 1)


@dataclass(frozen=True, eq=False)
class ImpreciseSpanner:
    n: int
    t: float
    s: float
    edges: np.ndarray  # (m, 2) int32, ascending within a row
    stats: dict = field(default_factory=dict)

    @property
    def edge_count(self) -> int:
        return self.edges.shape[0]


def build_imprecise_spanner(balls, t: float, check_disjoint: bool = True) -> ImpreciseSpanner:
    s = separation_for_stretch(t)
    bs = as_ball_set(balls)
    t0 = time.perf_counter()
    if check_disjoint:
        require_disjoint(bs)
    tree = SplitTree(bs.centers)
    edges, stats = ball_wspd_edges(bs, s, tree)
    stats["build_seconds"] = time.perf_counter() - t0
    stats["wspd_pairs"] = edges.shape[0]
    return ImpreciseSpanner(bs.n, float(t), s, edges, stats)


@dataclass(frozen=True, eq=False)
class PreciseInstance:
    points: np.ndarray

    def __len__(self):
        return self.points.shape[0]


def _check_inside(balls: BallSet, points: np.ndarray):
    off = np.linalg.norm(points - balls.centers, axis=1)
    slack = 1e-12 * (1 + np.linalg.norm(balls.centers, axis=1))
    bad = np.nonzero(off > balls.radii + slack)[0]
    if bad.size:
        raise GeometryError(f"instance point {int(bad[0])} lies outside its ball")


def make_instance(balls, points) -> PreciseInstance:
    bs = as_ball_set(balls)
    pts = np.array(points, dtype=np.float64)
    if pts.shape != bs.centers.shape:
        raise GeometryError(f"instance shape {pts.shape} != {bs.centers.shape}")
    _check_inside(bs, pts)
    pts.setflags(write=False)
    return PreciseInstance(pts)


def sample_instance(balls, strategy: str = "centers", seed=None) -> PreciseInstance:
    """Pick one point per ball.

    ``uniform-random`` rejection-samples each ball uniformly, ``boundary-random``
    draws uniformly from each bounding sphere.
    """
    bs = as_ball_set(balls)
    strategy = _ALIASES.get(strategy, strategy)
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    n, d = bs.centers.shape
    if strategy == "centers":
        return PreciseInstance(bs.centers)
    rng = np.random.default_rng(seed)
    if strategy == "uniform-random":
        offsets = np.empty((n, d))
        todo = np.arange(n)
        while todo.size:
            cand = rng.uniform(-1.0, 1.0, size=(todo.size, d))
            ok = np.einsum("ij,ij->i", cand, cand) <= 1.0
            offsets[todo[ok]] = cand[ok]
            todo = todo[~ok]
    else:
        offsets = rng.standard_normal((n, d))
        norms = np.linalg.norm(offsets, axis=1)
        while np.any(norms == 0):
            z = norms == 0
            offsets[z] = rng.standard_normal((int(z.sum()), d))
            norms = np.linalg.norm(offsets, axis=1)
        offsets /= norms[:, None]
    pts = bs.centers + bs.radii[:, None] * offsets
    pts.setflags(write=False)
    return PreciseInstance(pts)


@dataclass(frozen=True, eq=False)
class InstanceGraph:
    points: np.ndarray
    edges: np.ndarray
    weights: np.ndarray

    @classmethod
    def from_spanner(cls, spanner: ImpreciseSpanner, instance: PreciseInstance) -> "InstanceGraph":
        # spanner edges are already distinct with i < j
        return cls.build(instance.points, spanner.edges, canonical=True)

    @classmethod
    def build(cls, points, edges, canonical: bool = False) -> "InstanceGraph":
        """Graph on ``points``; repeated, reversed and self edges are dropped
        unless ``canonical`` promises there are none."""
        pts = np.asarray(points, dtype=np.float64)
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        n = pts.shape[0]
        if e.size and (e.min() < 0 or e.max() >= n):
            raise ValueError("edge endpoint out of range")
        if not canonical and e.size:
            # csr construction would add up the weights of repeated entries
            lo, hi = np.minimum(e[:, 0], e[:, 1]), np.maximum(e[:, 0], e[:, 1])
            keys = np.unique(lo[lo != hi] * n + hi[lo != hi])
            e = np.column_stack(np.divmod(keys, n))
        w = np.linalg.norm(pts[e[:, 0]] - pts[e[:, 1]], axis=1)
        return cls(pts, e, w)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def csr(self) -> sp.csr_matrix:
        # explicit zeros survive csr construction, so coincident endpoints stay connected
        return sp.csr_matrix((self.weights, (self.edges[:, 0], self.edges[:, 1])),
                             shape=(self.n, self.n))


@dataclass(frozen=True)
class DilationReport:
    value: float
    pair: tuple[int, int] | None
    disconnected: bool
    coincident: tuple[tuple[int, int], ...] = ()


def dilation_report(g: InstanceGraph, sources=None) -> DilationReport:
    """Max over vertex pairs of graph distance / Euclidean distance.

    ``sources`` restricts the maximum to pairs with one endpoint in that set.
    """
    n = g.n
    if n < 2:
        return DilationReport(1.0, None, False)
    src = np.arange(n) if sources is None else np.unique(np.asarray(sources, dtype=np.int64))
    dist = dijkstra(g.csr(), directed=False, indices=src)
    diff = g.points[src][:, None, :] - g.points[None, :, :]
    euclid = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    others = np.ones(dist.shape, dtype=bool)
    others[np.arange(src.size), src] = False
    coincident = others & (euclid == 0)
    pairs = tuple(sorted({(int(min(src[i], j)), int(max(src[i], j)))
                          for i, j in zip(*np.nonzero(coincident))}))
    valid = others & ~coincident
    if np.any(np.isinf(dist[valid])):
        i, j = np.argwhere(valid & np.isinf(dist))[0]
        return DilationReport(float("inf"), (int(src[i]), int(j)), True, pairs)
    if not valid.any():
        return DilationReport(1.0, None, False, pairs)
    ratio = np.where(valid, dist / np.where(valid, euclid, 1.0), -np.inf)
    i, j = np.unravel_index(int(np.argmax(ratio)), ratio.shape)
    a, b = int(src[i]), int(j)
    return DilationReport(float(ratio[i, j]), (min(a, b), max(a, b)), False, pairs)


def dilation(g: InstanceGraph) -> float:
    return dilation_report(g).value
