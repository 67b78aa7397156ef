"""Points, balls and axis-parallel boxes in R^d.

Scalar helpers (`Ball`, `AxisBox`, `ball_distance`, ...) are convenient for
small inputs and tests.  Bulk code works on `BallSet`, which keeps centers and
radii in contiguous float64 arrays.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial import cKDTree

DEFAULT_TOLERANCE = 1e-9
TOLERANCE_ENV = "IMPSPAN_TOLERANCE"


class GeometryError(ValueError):
    pass


class DimensionMismatch(GeometryError):
    pass


class OverlapError(GeometryError):
    """Raised when balls that must be pairwise disjoint are not."""

    def __init__(self, pairs):
        self.pairs = [(int(i), int(j)) for i, j in pairs]
        shown = ", ".join(f"({i},{j})" for i, j in self.pairs[:10])
        more = "" if len(self.pairs) <= 10 else f" and {len(self.pairs) - 10} more"
        super().__init__(f"balls are not pairwise disjoint: {shown}{more}")


def tolerance(tol: float | None = None) -> float:
    """Resolve the verification tolerance (explicit value, env override, default)."""
    if tol is not None:
        return float(tol)
    raw = os.environ.get(TOLERANCE_ENV)
    if raw:
        return float(raw)
    return DEFAULT_TOLERANCE


def _as_point(coords) -> tuple[float, ...]:
    pt = tuple(float(c) for c in coords)
    if not pt:
        raise GeometryError("a point needs at least one coordinate")
    if not all(math.isfinite(c) for c in pt):
        raise GeometryError(f"non-finite coordinate in {pt}")
    return pt


@dataclass(frozen=True)
class Ball:
    center: tuple[float, ...]
    radius: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "center", _as_point(self.center))
        r = float(self.radius)
        if not math.isfinite(r) or r < 0:
            raise GeometryError(f"radius must be finite and non-negative, got {r}")
        object.__setattr__(self, "radius", r)

    @property
    def dim(self) -> int:
        return len(self.center)


@dataclass(frozen=True)
class AxisBox:
    low: tuple[float, ...]
    high: tuple[float, ...]

    def __post_init__(self):
        low, high = _as_point(self.low), _as_point(self.high)
        if len(low) != len(high):
            raise DimensionMismatch("box corners differ in dimension")
        if any(a > b for a, b in zip(low, high)):
            raise GeometryError(f"box low {low} exceeds high {high}")
        object.__setattr__(self, "low", low)
        object.__setattr__(self, "high", high)

    @property
    def dim(self) -> int:
        return len(self.low)

    @property
    def lengths(self) -> tuple[float, ...]:
        return tuple(b - a for a, b in zip(self.low, self.high))

    @property
    def l_max(self) -> float:
        return max(self.lengths)

    @property
    def l_min(self) -> float:
        return min(self.lengths)

    @property
    def center(self) -> tuple[float, ...]:
        return tuple((a + b) / 2 for a, b in zip(self.low, self.high))

    def corners(self) -> np.ndarray:
        lo, hi = np.array(self.low), np.array(self.high)
        bits = np.array(np.meshgrid(*[[0, 1]] * self.dim, indexing="ij")).reshape(self.dim, -1).T
        return np.where(bits == 1, hi, lo)


def _check_same_dim(a: int, b: int):
    if a != b:
        raise DimensionMismatch(f"dimension mismatch: {a} vs {b}")


def ball_distance(a: Ball, b: Ball) -> float:
    """Center distance minus the sum of radii; negative when the balls overlap."""
    _check_same_dim(a.dim, b.dim)
    return math.dist(a.center, b.center) - (a.radius + b.radius)


def bounding_box(points) -> AxisBox:
    arr = np.asarray(points, dtype=float)
    if arr.size == 0:
        raise GeometryError("bounding box of an empty point set")
    if arr.ndim != 2:
        raise DimensionMismatch("points must share one dimension")
    return AxisBox(tuple(arr.min(axis=0)), tuple(arr.max(axis=0)))


def enclosing_radius(l_max, dim: int):
    """Radius (sqrt(d)/2) * L_max of the witness ball around a box."""
    return (math.sqrt(dim) / 2) * l_max


def enclosing_ball(box: AxisBox) -> Ball:
    return Ball(box.center, enclosing_radius(box.l_max, box.dim))


def unit_ball_volume_coeff(d: int) -> float:
    """pi^(d/2) / Gamma(d/2 + 1): volume of the unit d-ball."""
    if int(d) != d or d < 1:
        raise GeometryError(f"dimension must be a positive integer, got {d}")
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


@dataclass(frozen=True, eq=False)
class BallSet:
    """n balls in R^d stored column-wise; index i is the ball id."""

    centers: np.ndarray
    radii: np.ndarray

    def __post_init__(self):
        c = np.array(self.centers, dtype=np.float64, order="C", ndmin=2)
        r = np.array(self.radii, dtype=np.float64).reshape(-1)
        if c.shape[0] == 0 and r.size == 0:
            c = c.reshape(0, max(c.shape[1], 1))
        if c.ndim != 2 or c.shape[0] != r.size:
            raise GeometryError(f"centers {c.shape} do not match radii {r.shape}")
        if not np.all(np.isfinite(c)) or not np.all(np.isfinite(r)):
            raise GeometryError("non-finite ball data")
        if np.any(r < 0):
            raise GeometryError("negative radius")
        c.setflags(write=False)
        r.setflags(write=False)
        object.__setattr__(self, "centers", c)
        object.__setattr__(self, "radii", r)

    @classmethod
    def from_balls(cls, balls: Iterable[Ball]) -> "BallSet":
        balls = list(balls)
        if not balls:
            raise GeometryError("empty ball collection")
        dim = balls[0].dim
        for b in balls:
            _check_same_dim(dim, b.dim)
        return cls([b.center for b in balls], [b.radius for b in balls])

    @property
    def n(self) -> int:
        return self.radii.size

    @property
    def dim(self) -> int:
        return self.centers.shape[1]

    def __len__(self):
        return self.n

    def __getitem__(self, i: int) -> Ball:
        return Ball(tuple(self.centers[i]), float(self.radii[i]))

    def __iter__(self):
        for i in range(self.n):
            yield self[i]


def as_ball_set(balls) -> BallSet:
    if isinstance(balls, BallSet):
        return balls
    return BallSet.from_balls(balls)


def overlapping_pairs(balls) -> list[tuple[int, int]]:
    """All pairs (i, j), i < j, with ball_distance <= 0 (tangency counts)."""
    bs = as_ball_set(balls)
    if bs.n < 2:
        return []
    c, r = bs.centers, bs.radii
    tree = cKDTree(c)
    # an overlapping pair is within 2*max(r_i, r_j) of the larger ball's center
    hits = tree.query_ball_point(c, 2 * r)
    order = np.lexsort((np.arange(bs.n), r))
    rank = np.empty(bs.n, dtype=np.int64)
    rank[order] = np.arange(bs.n)
    out = []
    for i, cand in enumerate(hits):
        for j in cand:
            if rank[j] >= rank[i]:
                continue
            if math.dist(c[i], c[j]) - (r[i] + r[j]) <= 0:
                out.append((min(i, j), max(i, j)))
    out.sort()
    return out


def pairwise_disjoint(balls: Sequence[Ball] | BallSet) -> bool:
    balls = list(balls) if not isinstance(balls, BallSet) else balls
    if len(balls) < 2:
        return True
    return not overlapping_pairs(balls)


def require_disjoint(balls: BallSet):
    bad = overlapping_pairs(balls)
    if bad:
        raise OverlapError(bad)
