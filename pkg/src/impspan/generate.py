"""Seeded random inputs: pairwise-disjoint balls by rejection sampling."""

from __future__ import annotations

import itertools
import math

import numpy as np

from .geometry import BallSet, GeometryError, unit_ball_volume_coeff

ATTEMPTS_PER_BALL = 10**6


def domain_side(n: int, d: int, rmax: float, density: float) -> float:
    """Cube side such that n balls of radius rmax fill ``density`` of the volume."""
    r = rmax if rmax > 0 else 0.5
    return (n * unit_ball_volume_coeff(d) * r**d / density) ** (1 / d)


def random_disjoint_balls(n: int, d: int = 2, rmin: float = 1.0, rmax: float = 1.0,
                          seed: int = 0, density: float = 0.1, side: float | None = None,
                          batch: int = 4096) -> BallSet:
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    if not 0 <= rmin <= rmax:
        raise ValueError("need 0 <= rmin <= rmax")
    rng = np.random.default_rng(seed)
    side = domain_side(n, d, rmax, density) if side is None else float(side)
    # a grid cell of width 2*rmax only has to check its 3^d neighborhood
    cell = 2 * rmax if rmax > 0 else max(side / math.sqrt(n), 1e-9)
    grid: dict[tuple, list[int]] = {}
    centers = np.empty((n, d))
    radii = np.empty(n)
    offsets = list(itertools.product((-1, 0, 1), repeat=d))
    placed = 0
    attempts = 0
    limit = ATTEMPTS_PER_BALL * n
    while placed < n:
        cand = rng.uniform(0.0, side, size=(batch, d))
        rads = rng.uniform(rmin, rmax, size=batch) if rmax > rmin else np.full(batch, rmax)
        for c, r in zip(cand, rads):
            attempts += 1
            if attempts > limit:
                raise GeometryError(
                    f"placed only {placed}/{n} balls after {limit} attempts; "
                    "use a larger domain (lower density)")
            key = tuple(int(x // cell) for x in c)
            ok = True
            for off in offsets:
                for j in grid.get(tuple(k + o for k, o in zip(key, off)), ()):
                    if math.dist(c, centers[j]) - (r + radii[j]) <= 0:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            centers[placed] = c
            radii[placed] = r
            grid.setdefault(key, []).append(placed)
            placed += 1
            if placed == n:
                break
    return BallSet(centers, radii)
