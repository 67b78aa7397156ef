"""Radial segment family that forces every imprecise t-spanner to be complete.

Segment i lies on the ray at angle 2*pi*i/n between the circles of radius 0.4
and (t+1)/2.  Picking the inner endpoints of two segments and the outer
endpoints everywhere else leaves the two inner points closer than 1 while any
detour through an outer point is longer than t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import dijkstra

from .spanner import PreciseInstance

INNER_RADIUS = 0.4


@dataclass(frozen=True)
class Segment:
    p: tuple[float, float]
    q: tuple[float, float]

    @property
    def length(self) -> float:
        return math.dist(self.p, self.q)


def outer_radius(t: float) -> float:
    return (t + 1) / 2


def generate_otn(n: int, t: float) -> list[Segment]:
    if n < 2:
        raise ValueError("need at least two segments")
    if not t > 1:
        raise ValueError("stretch factor must exceed 1")
    theta = 2 * math.pi / n
    r_out = outer_radius(t)
    segs = []
    for i in range(n):
        c, s = math.cos(i * theta), math.sin(i * theta)
        segs.append(Segment((INNER_RADIUS * c, INNER_RADIUS * s), (r_out * c, r_out * s)))
    return segs


def adversarial_instance(segs, i: int, j: int) -> PreciseInstance:
    n = len(segs)
    if i == j:
        raise ValueError("need two distinct segments")
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError("segment index out of range")
    pts = np.array([seg.p if k in (i, j) else seg.q for k, seg in enumerate(segs)], dtype=float)
    return PreciseInstance(pts)


@dataclass(frozen=True)
class RemovedEdgeCase:
    i: int
    j: int
    margin: float  # best two-hop detour ratio minus t
    dilation: float  # true shortest-path dilation of (p_i, p_j) without edge (i, j)


@dataclass(frozen=True)
class CompletenessReport:
    n: int
    t: float
    cases: tuple[RemovedEdgeCase, ...]

    @property
    def exceeding(self) -> int:
        return sum(1 for c in self.cases if c.dilation > self.t and c.margin > 0)

    @property
    def ok(self) -> bool:
        return self.exceeding == len(self.cases)

    @property
    def min_margin(self) -> float:
        return min(c.margin for c in self.cases)

    def summary(self) -> str:
        return f"{self.exceeding}/{len(self.cases)} removed-edge cases exceed stretch"

    def csv(self) -> str:
        rows = ["i,j,margin"] + [f"{c.i},{c.j},{c.margin:.17g}" for c in self.cases]
        return "\n".join(rows) + "\n"


def verify_completeness_required(n: int, t: float) -> CompletenessReport:
    """Drop each edge of the complete graph in turn and measure the damage."""
    segs = generate_otn(n, t)
    cases = []
    for i in range(n):
        for j in range(i + 1, n):
            pts = adversarial_instance(segs, i, j).points
            diff = pts[:, None, :] - pts[None, :, :]
            w = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
            direct = w[i, j]
            others = [k for k in range(n) if k not in (i, j)]
            detour = min(w[i, k] + w[k, j] for k in others) if others else math.inf
            w[i, j] = w[j, i] = np.inf
            sp_len = dijkstra(w, directed=False, indices=i)[j]
            cases.append(RemovedEdgeCase(i, j, detour / direct - t, sp_len / direct))
    return CompletenessReport(n, float(t), tuple(cases))
