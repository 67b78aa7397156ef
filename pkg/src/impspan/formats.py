"""Plain-text artifact formats.

Ball file::

    dim 2
    0.5 1.25 0.1        # center coordinates then radius

Floats are written with 17 significant digits, so reading back gives the
same doubles.
"""

from __future__ import annotations

import numpy as np

from .geometry import BallSet, GeometryError, require_disjoint
from .pairsets import PairSets


def fmt(x: float) -> str:
    return f"{float(x):.17g}"


def dumps_balls(balls: BallSet) -> str:
    lines = [f"dim {balls.dim}"]
    for c, r in zip(balls.centers, balls.radii):
        lines.append(" ".join(fmt(v) for v in (*c, r)))
    return "\n".join(lines) + "\n"


def loads_balls(text: str, validate: bool = True) -> BallSet:
    rows = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    rows = [r for r in rows if r]
    if not rows:
        raise GeometryError("empty ball file")
    head = rows[0].split()
    if len(head) != 2 or head[0] != "dim":
        raise GeometryError(f"expected 'dim d' header, got {rows[0]!r}")
    d = int(head[1])
    if d < 1:
        raise GeometryError("dimension must be positive")
    data = []
    for lineno, row in enumerate(rows[1:], start=2):
        vals = row.split()
        if len(vals) != d + 1:
            raise GeometryError(f"ball line {lineno}: expected {d + 1} numbers, got {len(vals)}")
        data.append([float(v) for v in vals])
    if not data:
        raise GeometryError("ball file has no balls")
    arr = np.array(data)
    balls = BallSet(arr[:, :d], arr[:, d])
    if validate:
        require_disjoint(balls)
    return balls


def write_balls(path, balls: BallSet):
    with open(path, "w") as f:
        f.write(dumps_balls(balls))


def read_balls(path, validate: bool = True) -> BallSet:
    with open(path) as f:
        return loads_balls(f.read(), validate)


def dumps_pairs(pairs: PairSets, categories=None) -> str:
    """One pair per line: ``A: i,j,... | B: k,... | category``."""
    out = []
    for k, (a, b) in enumerate(pairs):
        cat = "direct" if categories is None else categories[k]
        out.append(f"A: {','.join(map(str, sorted(a.tolist())))} | "
                   f"B: {','.join(map(str, sorted(b.tolist())))} | {cat}")
    return "\n".join(out) + ("\n" if out else "")


def loads_pairs(text: str) -> tuple[PairSets, list[str]]:
    sets, cats = [], []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split("|")]
        if len(parts) != 3 or not parts[0].startswith("A:") or not parts[1].startswith("B:"):
            raise ValueError(f"pair line {lineno}: cannot parse {line!r}")
        a = [int(x) for x in parts[0][2:].split(",") if x.strip()]
        b = [int(x) for x in parts[1][2:].split(",") if x.strip()]
        sets.append((a, b))
        cats.append(parts[2])
    return PairSets.from_sets(sets), cats


def write_edges(f, edges: np.ndarray, chunk: int = 1_000_000):
    for lo in range(0, edges.shape[0], chunk):
        block = edges[lo:lo + chunk]
        f.write("".join(f"{i} {j}\n" for i, j in block.tolist()))


def loads_edges(text: str) -> np.ndarray:
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        vals = line.split()
        if len(vals) != 2:
            raise ValueError(f"edge line {lineno}: expected 'i j', got {line!r}")
        i, j = int(vals[0]), int(vals[1])
        rows.append((min(i, j), max(i, j)))
    return np.array(rows, dtype=np.int64).reshape(-1, 2)


def dumps_points(points: np.ndarray) -> str:
    return "".join(" ".join(fmt(v) for v in p) + "\n" for p in points)


def dumps_segments(segs) -> str:
    return "".join(f"{fmt(s.p[0])} {fmt(s.p[1])} {fmt(s.q[0])} {fmt(s.q[1])}\n" for s in segs)
