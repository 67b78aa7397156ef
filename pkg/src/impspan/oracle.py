"""Brute-force checkers for decompositions, spanners and instances.

Nothing here calls the construction predicates or reads split-tree boxes;
witness balls are rebuilt from raw coordinates of explicit id sets.
"""

from __future__ import annotations

import io
import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import tolerance
from .pairsets import PairSets

MAX_ORACLE_VERTICES = 600


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str
    margin: float


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)

    def add(self, name, passed, detail, margin=math.nan) -> Check:
        c = Check(name, bool(passed), detail, float(margin))
        self.checks.append(c)
        return c

    def extend(self, other: "VerificationReport"):
        self.checks.extend(other.checks)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    @property
    def min_margin(self) -> float:
        vals = [c.margin for c in self.checks if not math.isnan(c.margin)]
        return min(vals) if vals else math.nan

    def near_misses(self, warn_at: float = 1e-6) -> list[Check]:
        return [c for c in self.checks if c.passed and c.margin < warn_at]

    def table(self) -> str:
        width = max([len(c.name) for c in self.checks] + [5])
        lines = [f"{'check':<{width}}  result  {'margin':>12}  detail"]
        for c in self.checks:
            margin = "-" if math.isnan(c.margin) else f"{c.margin:.4g}"
            lines.append(f"{c.name:<{width}}  {'PASS' if c.passed else 'FAIL':<6}  "
                         f"{margin:>12}  {c.detail}")
        return "\n".join(lines) + "\n"

    def csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "passed", "margin", "detail"])
        for c in self.checks:
            w.writerow([c.name, int(c.passed), repr(c.margin), c.detail])
        return buf.getvalue()


def _as_pairsets(pairs) -> PairSets:
    if isinstance(pairs, PairSets):
        return pairs
    if hasattr(pairs, "id_sets"):
        return pairs.id_sets()
    return PairSets.from_sets(pairs)


def _unpack(wspd, balls, s):
    pairs = _as_pairsets(wspd)
    if balls is None:
        balls = wspd.balls
    if s is None:
        s = wspd.s
    return pairs, np.asarray(balls.centers, dtype=float), np.asarray(balls.radii, dtype=float), float(s)


def _cross_products(ps: PairSets):
    """All (p, q) with p on side A and q on side B, over every pair."""
    na, nb = ps.a_sizes, ps.b_sizes
    prod = na * nb
    total = int(prod.sum())
    k = np.repeat(np.arange(len(ps)), prod)
    first = np.zeros(len(ps), dtype=np.int64)
    np.cumsum(prod[:-1], out=first[1:])
    pos = np.arange(total, dtype=np.int64) - first[k]
    ia, ib = np.divmod(pos, nb[k])
    return ps.a_ids[ps.a_off[k] + ia], ps.b_ids[ps.b_off[k] + ib]


def check_coverage(pairs, n: int) -> VerificationReport:
    """Every unordered pair of distinct ids must be separated by exactly one pair."""
    rep = VerificationReport()
    ps = _as_pairsets(pairs)
    name = "coverage: unique separating pair per id pair"
    if ps.a_ids.size and (min(ps.a_ids.min(), ps.b_ids.min()) < 0
                          or max(ps.a_ids.max(), ps.b_ids.max()) >= n):
        rep.add(name, False, "ids out of range", -1)
        return rep
    if np.any(ps.a_sizes == 0) or np.any(ps.b_sizes == 0):
        rep.add(name, False, "empty pair side", -1)
        return rep
    p, q = _cross_products(ps)
    same = int(np.count_nonzero(p == q))
    lo, hi = np.minimum(p, q), np.maximum(p, q)
    if n * n <= 50_000_000:
        counts = np.bincount(lo * n + hi, minlength=n * n).reshape(n, n)
        upper = counts[np.triu_indices(n, 1)]
        missing = int(np.count_nonzero(upper == 0))
        repeated = int(np.count_nonzero(upper > 1))
    else:
        keys, counts = np.unique((lo * n + hi)[lo != hi], return_counts=True)
        missing = n * (n - 1) // 2 - keys.size
        repeated = int(np.count_nonzero(counts > 1))
    bad = missing + repeated + same
    detail = (f"n={n} pairs={len(ps)} products={p.size} "
              f"missing={missing} repeated={repeated} shared_ids={same}")
    rep.add(name, bad == 0, detail, math.nan if bad == 0 else -bad)
    return rep


def _side_geometry(ids, off, centers):
    pts = centers[ids]
    starts = off[:-1]
    lo = np.minimum.reduceat(pts, starts, axis=0)
    hi = np.maximum.reduceat(pts, starts, axis=0)
    d = centers.shape[1]
    rho = (math.sqrt(d) / 2) * (hi - lo).max(axis=1)
    return (lo + hi) / 2, rho


def definition2_slack(pairs: PairSets, centers, radii, s: float) -> np.ndarray:
    """Per-pair slack of the ball separation rule; +inf for singleton pairs."""
    ps = pairs
    xa, ra = _side_geometry(ps.a_ids, ps.a_off, centers)
    xb, rb = _side_geometry(ps.b_ids, ps.b_off, centers)
    na, nb = ps.a_sizes, ps.b_sizes
    first_a = ps.a_ids[ps.a_off[:-1]]
    first_b = ps.b_ids[ps.b_off[:-1]]
    factor = 3 * s + 4
    slack = np.full(len(ps), np.inf)

    one_a = (na == 1) & (nb > 1)
    k = first_a[one_a]
    slack[one_a] = (np.linalg.norm(centers[k] - xb[one_a], axis=1) - rb[one_a]
                    - radii[k] - factor * rb[one_a])
    one_b = (na > 1) & (nb == 1)
    k = first_b[one_b]
    slack[one_b] = (np.linalg.norm(centers[k] - xa[one_b], axis=1) - ra[one_b]
                    - radii[k] - factor * ra[one_b])
    both = (na > 1) & (nb > 1)
    rho = np.maximum(ra[both], rb[both])
    slack[both] = np.linalg.norm(xa[both] - xb[both], axis=1) - 2 * rho - factor * rho
    return slack


def check_definition2(wspd, balls=None, s=None, tol=None) -> VerificationReport:
    """Re-derive witness balls for every pair and test the four-case rule."""
    tol = tolerance(tol)
    ps, centers, radii, s = _unpack(wspd, balls, s)
    rep = VerificationReport()
    name = "separation: ball pairs s-well-separated"
    if len(ps) == 0:
        rep.add(name, True, "no pairs", math.inf)
        return rep
    slack = definition2_slack(ps, centers, radii, s)
    worst = int(np.argmin(slack))
    bad = int(np.count_nonzero(slack < -tol))
    rep.add(name, bad == 0,
            f"pairs={len(ps)} s={s:g} violations={bad} worst_pair={worst}", float(slack[worst]))
    return rep


def all_pairs_dilation_oracle(points, edges) -> float:
    """Exact dilation by Floyd-Warshall on the full distance matrix."""
    pts = np.asarray(points, dtype=float)
    n = pts.shape[0]
    if n > MAX_ORACLE_VERTICES:
        raise ValueError(f"oracle is limited to {MAX_ORACLE_VERTICES} vertices; "
                         "use spanner.dilation for larger graphs")
    if n < 2:
        return 1.0
    diff = pts[:, None, :] - pts[None, :, :]
    euclid = np.sqrt((diff ** 2).sum(axis=2))
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    for i, j in np.asarray(edges, dtype=np.int64).reshape(-1, 2):
        w = math.dist(pts[i], pts[j])
        if w < dist[i, j]:
            dist[i, j] = dist[j, i] = w
    for k in range(n):
        np.minimum(dist, dist[:, k, None] + dist[None, k, :], out=dist)
    iu = np.triu_indices(n, 1)
    e, g = euclid[iu], dist[iu]
    keep = e > 0
    if not keep.any():
        return 1.0
    return float(np.max(g[keep] / e[keep]))


def lemma2_slack(pairs: PairSets, centers, radii, s: float, points) -> np.ndarray:
    """Per-pair slack of point well-separation for instance sets.

    ``points`` has shape (I, n, d).  Plural sides get a radius-3*rho ball on
    their center box; a singleton side gets the radius-3*rho ball that touches
    its instance point from the far side.  Returns an (I, m) array.
    """
    ps = pairs
    pts = np.asarray(points, dtype=float)
    inst = pts.shape[0]
    xa, ra = _side_geometry(ps.a_ids, ps.a_off, centers)
    xb, rb = _side_geometry(ps.b_ids, ps.b_off, centers)
    na, nb = ps.a_sizes, ps.b_sizes
    m = len(ps)
    slack = np.full((inst, m), np.inf)

    single = (na == 1) & (nb == 1)
    if single.any():
        pa = pts[:, ps.a_ids[ps.a_off[:-1][single]]]
        pb = pts[:, ps.b_ids[ps.b_off[:-1][single]]]
        apart = np.linalg.norm(pa - pb, axis=2) > 0
        slack[:, single] = np.where(apart, np.inf, -np.inf)

    rho = np.where((na > 1) & (nb > 1), np.maximum(ra, rb), np.where(na > 1, ra, rb))
    big = 3 * rho

    def spread(ids, off, x):
        # farthest instance point of each side from the side's box center
        owner = np.repeat(np.arange(m), np.diff(off))
        dev = np.linalg.norm(pts[:, ids] - x[owner][None], axis=2)
        return np.maximum.reduceat(dev, off[:-1], axis=1)

    plural = ~single
    if not plural.any():
        return slack
    far_a = spread(ps.a_ids, ps.a_off, xa)
    far_b = spread(ps.b_ids, ps.b_off, xb)

    # witness centers per pair and instance
    wa = np.broadcast_to(xa, (inst,) + xa.shape).copy()
    wb = np.broadcast_to(xb, (inst,) + xb.shape).copy()
    for singles, own_ids, own_off, other_x, w_own in (
            ((na == 1) & (nb > 1), ps.a_ids, ps.a_off, xb, wa),
            ((nb == 1) & (na > 1), ps.b_ids, ps.b_off, xa, wb)):
        if not singles.any():
            continue
        p = pts[:, own_ids[own_off[:-1][singles]]]
        away = p - other_x[singles][None]
        norm = np.linalg.norm(away, axis=2, keepdims=True)
        with np.errstate(invalid="ignore", divide="ignore"):
            w_own[:, singles] = p + big[singles][None, :, None] * away / norm

    # a singleton's ball is placed to touch its point, so only plural sides can fail containment
    contain_a = np.where(na > 1, big - far_a, np.inf)
    contain_b = np.where(nb > 1, big - far_b, np.inf)
    separation = np.linalg.norm(wa - wb, axis=2) - 2 * big - s * big
    worst = np.minimum(np.minimum(contain_a, contain_b), separation)
    worst = np.where(np.isnan(worst), -np.inf, worst)
    slack[:, plural] = worst[:, plural]
    return slack


def check_lemma2_instances(wspd, instances, balls=None, s=None, tol=None,
                           chunk_floats: int = 20_000_000) -> VerificationReport:
    """Instance sets of every pair must be point-well-separated at the same s."""
    tol = tolerance(tol)
    ps, centers, radii, s = _unpack(wspd, balls, s)
    rep = VerificationReport()
    pts = np.stack([np.asarray(getattr(x, "points", x), dtype=float) for x in instances])
    name = "instances: pair sides s-well-separated"
    if pts.shape[1:] != centers.shape:
        rep.add(name, False, "instance shape mismatch", -math.inf)
        return rep
    inside = np.linalg.norm(pts - centers[None], axis=2) - radii[None]
    scale = 1e-12 * (1 + np.linalg.norm(centers, axis=1))
    outside = int(np.count_nonzero(inside > scale[None]))
    rep.add("instances: points inside their balls", outside == 0,
            f"instances={pts.shape[0]} outside={outside}", math.nan)
    if len(ps) == 0:
        rep.add(name, True, "no pairs", math.inf)
        return rep
    flat = int(ps.a_ids.size + ps.b_ids.size + 4 * len(ps)) * centers.shape[1]
    step = max(1, chunk_floats // max(flat, 1))
    worst_val, worst_at, bad = math.inf, (0, 0), 0
    for lo in range(0, pts.shape[0], step):
        sl = lemma2_slack(ps, centers, radii, s, pts[lo:lo + step])
        bad += int(np.count_nonzero(sl < -tol))
        idx = np.unravel_index(int(np.argmin(sl)), sl.shape)
        if sl[idx] < worst_val:
            worst_val, worst_at = float(sl[idx]), (lo + int(idx[0]), int(idx[1]))
    rep.add(name, bad == 0,
            f"pairs={len(ps)} instances={pts.shape[0]} s={s:g} violations={bad} "
            f"worst(instance,pair)={worst_at}", worst_val)
    return rep
