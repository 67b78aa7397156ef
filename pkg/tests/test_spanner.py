import math

import numpy as np
import pytest

from impspan import (BallSet, InstanceGraph, build_imprecise_spanner, compute_ball_wspd,
                     dilation, dilation_report, sample_instance, separation_for_stretch)
from impspan.generate import random_disjoint_balls
from impspan.geometry import GeometryError
from impspan.oracle import all_pairs_dilation_oracle, check_coverage, check_lemma2_instances
from impspan.spanner import make_instance

from conftest import floyd_warshall_loops


def test_separation_for_stretch():
    assert separation_for_stretch(3) == 8
    assert separation_for_stretch(2) == 12
    with pytest.raises(ValueError):
        separation_for_stretch(1)


def test_two_balls_one_edge():
    sp = build_imprecise_spanner(BallSet([(0, 0), (4, 0)], [1, 1]), 2.0)
    assert sp.edges.tolist() == [[0, 1]]
    assert sp.s == 12


def test_fifty_balls_edges_match_wspd():
    balls = random_disjoint_balls(50, 2, 1.0, 1.0, seed=8)
    sp = build_imprecise_spanner(balls, 2.0)
    w = compute_ball_wspd(balls, 12.0)
    assert sp.edge_count == len(w)
    assert len({tuple(e) for e in sp.edges.tolist()}) == sp.edge_count
    assert np.all(sp.edges[:, 0] < sp.edges[:, 1])
    # representative = smallest id on each side
    expected = set()
    for a, b in w.id_sets():
        x, y = int(a.min()), int(b.min())
        expected.add((min(x, y), max(x, y)))
    assert {tuple(e) for e in sp.edges.tolist()} == expected


def test_sample_centers_and_degenerate():
    balls = BallSet([(0, 0), (3, 1), (7, -2)], [0.5, 0.0, 1.0])
    inst = sample_instance(balls, "centers")
    assert np.array_equal(inst.points, balls.centers)
    points = BallSet(balls.centers, [0, 0, 0])
    for strategy in ("uniform-random", "boundary-random"):
        assert np.array_equal(sample_instance(points, strategy, seed=3).points, points.centers)


def test_boundary_sampling_reproducible_and_on_sphere():
    balls = random_disjoint_balls(40, 3, 0.2, 1.5, seed=2)
    a = sample_instance(balls, "boundary-random", seed=17)
    b = sample_instance(balls, "boundary-random", seed=17)
    assert np.array_equal(a.points, b.points)
    norms = np.linalg.norm(a.points - balls.centers, axis=1)
    assert np.allclose(norms, balls.radii, rtol=0, atol=1e-12)


def test_uniform_sampling_inside():
    balls = random_disjoint_balls(200, 2, 0.5, 1.0, seed=6)
    inst = sample_instance(balls, "uniform-random", seed=1)
    make_instance(balls, inst.points)  # raises if any point falls outside
    off = np.linalg.norm(inst.points - balls.centers, axis=1) / balls.radii
    # uniform in a disk: P(|x| <= 1/2) = 1/4
    assert 0.15 < np.mean(off <= 0.5) < 0.35


def test_make_instance_rejects_outside_point():
    balls = BallSet([(0, 0), (5, 0)], [1, 1])
    with pytest.raises(GeometryError):
        make_instance(balls, [(0, 1.01), (5, 0)])


def test_unknown_strategy():
    with pytest.raises(ValueError):
        sample_instance(BallSet([(0, 0)], [1]), "gaussian")


def test_dilation_complete_graph_is_one():
    pts = np.random.default_rng(0).random((12, 2))
    edges = [(i, j) for i in range(12) for j in range(i + 1, 12)]
    assert dilation(InstanceGraph.build(pts, edges)) == pytest.approx(1.0)


def test_dilation_path_graph():
    pts = [(0, 0), (1, 0), (0, 1)]
    edges = [(0, 1), (1, 2)]
    # hand computation: d_G(0,2) = 1 + sqrt(2), |02| = 1
    loops = floyd_warshall_loops(pts, edges)
    assert loops[0][2] == pytest.approx(1 + math.sqrt(2))
    rep = dilation_report(InstanceGraph.build(pts, edges))
    assert rep.value == pytest.approx(1 + math.sqrt(2))
    assert rep.pair == (0, 2)
    assert all_pairs_dilation_oracle(pts, edges) == pytest.approx(1 + math.sqrt(2))


def test_dilation_disconnected_and_coincident():
    rep = dilation_report(InstanceGraph.build([(0, 0), (1, 0), (5, 5)], [(0, 1)]))
    assert rep.disconnected and math.isinf(rep.value)
    rep = dilation_report(InstanceGraph.build([(0, 0), (0, 0), (1, 0)], [(0, 1), (1, 2)]))
    assert rep.coincident == ((0, 1),)
    assert rep.value == pytest.approx(1.0)


def test_dilation_sampled_sources_is_lower_bound():
    balls = random_disjoint_balls(80, 2, 0.5, 1.0, seed=1)
    sp = build_imprecise_spanner(balls, 2.0)
    g = InstanceGraph.from_spanner(sp, sample_instance(balls, "boundary-random", seed=0))
    full = dilation(g)
    part = dilation_report(g, sources=[0, 5, 9]).value
    assert part <= full + 1e-12


@pytest.mark.parametrize("t", [1.5, 2.0, 3.0])
def test_stretch_on_sampled_instances(t):
    balls = random_disjoint_balls(60, 2, 0.1, 2.0, seed=int(10 * t))
    sp = build_imprecise_spanner(balls, t)
    for strategy in ("centers", "uniform-random", "boundary-random"):
        for seed in range(5):
            inst = sample_instance(balls, strategy, seed=seed)
            g = InstanceGraph.from_spanner(sp, inst)
            value = dilation(g)
            assert value <= t + 1e-9
            assert abs(value - all_pairs_dilation_oracle(inst.points, sp.edges)) <= 1e-9


def test_instance_pairs_form_point_wspd():
    balls = random_disjoint_balls(120, 2, 0.05, 1.5, seed=12)
    w = compute_ball_wspd(balls, 4.0)
    insts = [sample_instance(balls, "boundary-random", seed=k) for k in range(10)]
    assert check_coverage(w, balls.n).ok
    assert check_lemma2_instances(w, insts).ok


def test_rejects_small_t():
    with pytest.raises(ValueError):
        build_imprecise_spanner(BallSet([(0, 0), (4, 0)], [1, 1]), 1.0)


def test_repeated_and_reversed_edges_count_once():
    pts = [(0, 0), (3, 0), (3, 4)]
    g = InstanceGraph.build(pts, [(0, 1), (1, 0), (0, 1), (1, 2), (2, 2)])
    assert g.edges.tolist() == [[0, 1], [1, 2]]
    assert dilation(g) == pytest.approx(7 / 5)
