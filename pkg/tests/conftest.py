import itertools
import math

import numpy as np
import pytest

from impspan.generate import random_disjoint_balls


def brute_pair_counts(pairs, n):
    """Count, with plain sets, how often each unordered id pair is separated."""
    counts = {}
    for a, b in pairs:
        for p in a:
            for q in b:
                key = (min(p, q), max(p, q))
                counts[key] = counts.get(key, 0) + 1
    return counts


def brute_coverage_ok(pairs, n):
    counts = brute_pair_counts(pairs, n)
    every = set(itertools.combinations(range(n), 2))
    return set(counts) == every and all(v == 1 for v in counts.values())


def floyd_warshall_loops(points, edges):
    """Triple-loop shortest paths; only for tiny graphs."""
    n = len(points)
    d = [[0.0 if i == j else math.inf for j in range(n)] for i in range(n)]
    for i, j in edges:
        w = math.dist(points[i], points[j])
        d[i][j] = d[j][i] = min(d[i][j], w)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return d


@pytest.fixture
def three_balls():
    from impspan import BallSet
    return BallSet([(0, 0), (1, 0), (60, 0)], [0.1, 0.1, 56])


@pytest.fixture(params=[(30, 1, 0), (40, 2, 1), (25, 3, 2)], ids=["d1", "d2", "d3"])
def random_balls(request):
    n, d, seed = request.param
    return random_disjoint_balls(n, d, 0.05, 1.5, seed=seed, density=0.15)


_acceptance_lines = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion; returns the verdict."""
    def report(number, title, ok, detail, extra=()):
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title} [{detail}]"
        _acceptance_lines.append(line)
        _acceptance_lines.extend(f"      {x}" for x in extra)
        print(line)
        return ok
    return report


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
