import math

import numpy as np
import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from impspan import (BallPair, BallSet, OverlapError, ball_pair_well_separated,
                     build_split_tree, compute_ball_wspd, find_pairs, packing_bound,
                     singleton_separation_test)
from impspan.generate import random_disjoint_balls
from impspan.oracle import check_coverage, check_definition2

from conftest import brute_coverage_ok


def cluster(rk):
    # two cluster balls at (0,0) and (1,0); the query ball is centered at (60,0)
    balls = BallSet([(0, 0), (1, 0), (60, 0)], [0.1, 0.1, rk])
    return balls, build_split_tree(balls.centers)


def test_singleton_test_leaf_passes():
    balls, t = cluster(50)
    assert singleton_separation_test(balls, 2, t.leaf(0), 1.0)


def test_singleton_test_threshold():
    balls, t = cluster(50)
    w = t.root.left
    assert sorted(w.point_ids.tolist()) == [0, 1]
    # 59.5 - 0.7071 - 50 = 8.79 >= 7 * 0.7071
    assert singleton_separation_test(balls, 2, w, 1.0)
    balls, t = cluster(56)
    # 59.5 - 0.7071 - 56 = 2.79 < 4.95
    assert not singleton_separation_test(balls, 2, t.root.left, 1.0)


def test_find_pairs_examples():
    balls, t = cluster(56)
    v, w = t.leaf(2), t.root.left
    pairs = find_pairs(t, balls, v, w, 1.0)
    assert {(p.a, p.b) for p in pairs} == {(frozenset({2}), frozenset({0})),
                                          (frozenset({2}), frozenset({1}))}
    assert all(p.category == "partitioned" for p in pairs)

    balls, t = cluster(50)
    pairs = find_pairs(t, balls, t.leaf(2), t.root.left, 1.0)
    assert pairs == [BallPair(frozenset({2}), frozenset({0, 1}), "direct")]

    pairs = find_pairs(t, balls, t.leaf(2), t.leaf(0), 1.0)
    assert pairs == [BallPair(frozenset({2}), frozenset({0}), "direct")]


def test_find_pairs_requires_leaf():
    balls, t = cluster(50)
    with pytest.raises(ValueError):
        find_pairs(t, balls, t.root.left, t.leaf(2), 1.0)


def test_two_balls():
    w = compute_ball_wspd(BallSet([(0, 0), (5, 5)], [1, 2]), 3.0)
    assert [(p.a, p.b) for p in w.pairs] == [(frozenset({0}), frozenset({1}))]


def test_three_ball_example(three_balls):
    w = compute_ball_wspd(three_balls, 1.0)
    got = {(p.a, p.b, p.category) for p in w.pairs}
    assert got == {(frozenset({0}), frozenset({1}), "direct"),
                   (frozenset({2}), frozenset({0}), "partitioned"),
                   (frozenset({2}), frozenset({1}), "partitioned")}
    assert w.stats["point_pairs"] == 2 and w.stats["split_pairs"] == 1
    assert w.stats["radius_violations"] == 0
    assert check_coverage(w, 3).ok
    assert check_definition2(w).ok
    for p in w.pairs:
        assert ball_pair_well_separated(p, three_balls, 1.0)


def test_merged_pair_is_not_separated(three_balls):
    assert not ball_pair_well_separated((frozenset({2}), frozenset({0, 1})), three_balls, 1.0)
    assert ball_pair_well_separated(BallPair(frozenset({0}), frozenset({2})), three_balls, 1.0)


def test_overlap_rejected():
    with pytest.raises(OverlapError) as err:
        compute_ball_wspd(BallSet([(0, 0), (1.5, 0), (9, 9)], [1, 1, 1]), 1.0)
    assert err.value.pairs == [(0, 1)]


def test_hundred_unit_balls_cover_4950():
    balls = random_disjoint_balls(100, 2, 1.0, 1.0, seed=4)
    w = compute_ball_wspd(balls, 2.0)
    sets = w.id_sets().as_sets()
    assert sum(len(a) * len(b) for a, b in sets) == 4950
    assert brute_coverage_ok(sets, 100)
    assert check_definition2(w).ok


@pytest.mark.parametrize("s, d, expected", [
    (1, 2, 144 / math.pi),
    (1, 1, 6.0),
    (2, 2, 225 / math.pi),
])
def test_packing_bound(s, d, expected):
    assert packing_bound(s, d) == pytest.approx(expected)
    assert packing_bound(1, 2) == pytest.approx(45.837, abs=1e-3)
    assert packing_bound(2, 2) == pytest.approx(71.62, abs=1e-2)


def mixed_radii(n, d, seed):
    """Many small balls plus a few large ones, so find_pairs actually splits."""
    rng = np.random.default_rng(seed)
    big = random_disjoint_balls(max(2, n // 15), d, 3.0, 12.0, seed=seed, density=0.05)
    side = big.centers.max() + 15
    centers, radii = list(big.centers), list(big.radii)
    while len(radii) < n:
        c = rng.uniform(-5, side, size=d)
        r = rng.uniform(0.01, 0.3)
        if all(math.dist(c, c2) > r + r2 for c2, r2 in zip(centers, radii)):
            centers.append(c)
            radii.append(r)
    return BallSet(centers, radii)


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("s", [0.5, 2.0])
def test_mixed_radii_properties(d, s):
    balls = mixed_radii(150, d, seed=d)
    w = compute_ball_wspd(balls, s)
    assert check_coverage(w, balls.n).ok
    assert check_definition2(w).ok
    assert w.stats["radius_violations"] == 0
    mult = w.partitioned_multiplicity()
    assert mult.max() <= packing_bound(s, d)
    # size accounting: direct pairs never exceed the point pairs
    assert w.stats["direct"] + w.stats["split_pairs"] == w.stats["point_pairs"]
    assert len(w) == w.stats["direct"] + w.stats["partitioned"]


def test_partitioning_happens_for_mixed_radii():
    w = compute_ball_wspd(mixed_radii(150, 2, seed=9), 1.0)
    assert w.stats["partitioned"] > 0


def brute_definition2(a, b, balls, s):
    """Four-case rule with witness boxes built by hand."""
    c, r = balls.centers, balls.radii
    d = c.shape[1]

    def witness(ids):
        pts = c[list(ids)]
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        return (lo + hi) / 2, math.sqrt(d) / 2 * float((hi - lo).max())

    if len(a) == 1 and len(b) == 1:
        return True
    if len(a) > 1 and len(b) == 1:
        a, b = b, a
    if len(a) == 1:
        (k,) = a
        x, rho = witness(b)
        return math.dist(c[k], x) - rho - r[k] >= (3 * s + 4) * rho
    xa, ra = witness(a)
    xb, rb = witness(b)
    rho = max(ra, rb)
    return math.dist(xa, xb) - 2 * rho >= (3 * s + 4) * rho


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 40), st.integers(1, 3), st.integers(0, 10**6),
       st.sampled_from([0.5, 1.0, 3.0, 8.0]))
def test_random_inputs_satisfy_decomposition(n, d, seed, s):
    balls = random_disjoint_balls(n, d, 0.0, 2.0, seed=seed, density=0.2)
    w = compute_ball_wspd(balls, s)
    sets = w.id_sets().as_sets()
    assert brute_coverage_ok(sets, n)
    for a, b in sets:
        assert brute_definition2(a, b, balls, s)
    assert w.stats["radius_violations"] == 0
