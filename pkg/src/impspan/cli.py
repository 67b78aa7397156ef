"""impspan command line: gen, wspd, spanner, verify, lowerbound, bench."""

from __future__ import annotations

import argparse
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import formats
from .generate import random_disjoint_balls
from .geometry import GeometryError, OverlapError, tolerance
from .lowerbound import generate_otn, verify_completeness_required
from .oracle import (VerificationReport, all_pairs_dilation_oracle, check_coverage,
                     check_definition2, check_lemma2_instances, MAX_ORACLE_VERTICES)
from .spanner import (STRATEGIES, InstanceGraph, build_imprecise_spanner, dilation_report,
                      sample_instance, separation_for_stretch)
from .wspd_balls import CATEGORY_NAMES, compute_ball_wspd

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
FULL_DILATION_LIMIT = 1024
SOURCE_SAMPLE = 256
S_WARN = 1000


class UsageError(Exception):
    pass


def _pmap(fn, items, threads):
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _instances(balls, strategies, samples, seed):
    """(label, instance) for the requested strategies; random ones get distinct seeds."""
    out = []
    for k, strategy in enumerate(strategies):
        if strategy == "centers":
            out.append(("centers", sample_instance(balls, "centers")))
            continue
        for i in range(samples):
            out.append((f"{strategy}#{i}",
                        sample_instance(balls, strategy, seed=[seed, k, i])))
    return out


def _strategies(arg):
    if arg in (None, "all"):
        return list(STRATEGIES)
    if arg not in STRATEGIES:
        raise UsageError(f"--strategy must be one of {', '.join(STRATEGIES)} or all")
    return [arg]


def _warn_s(s):
    if s > S_WARN:
        print(f"warning: separation s={s:.4g} exceeds {S_WARN}; "
              "the decomposition will be close to quadratic", file=sys.stderr)


def _dilations(balls, edges, instances, threads, seed):
    n = balls.n
    sources = None
    if n > FULL_DILATION_LIMIT:
        rng = np.random.default_rng(seed)
        sources = rng.choice(n, size=SOURCE_SAMPLE, replace=False)

    def one(item):
        label, inst = item
        return label, dilation_report(InstanceGraph.build(inst.points, edges), sources)

    return _pmap(one, instances, threads), sources is not None


def cmd_gen(args):
    balls = random_disjoint_balls(args.n, args.dim, args.rmin, args.rmax, args.seed,
                                  density=args.density)
    text = formats.dumps_balls(balls)
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_wspd(args):
    balls = formats.read_balls(args.input)
    _warn_s(3 * args.s + 6)
    t0 = time.perf_counter()
    w = compute_ball_wspd(balls, args.s)
    ms = (time.perf_counter() - t0) * 1000
    if args.out:
        cats = [CATEGORY_NAMES[c] for c in w.category]
        with open(args.out, "w") as f:
            f.write(formats.dumps_pairs(w.id_sets(), cats))
    if args.dump_tree:
        with open(args.dump_tree, "w") as f:
            f.write(w.tree.dump())
    st = w.stats
    print(f"n={balls.n} s={args.s:g} m={len(w)} point_pairs={st['point_pairs']} "
          f"direct={st['direct']} partitioned={st['partitioned']} "
          f"radius_violations={st['radius_violations']} build_ms={ms:.1f}")
    return EXIT_OK if st["radius_violations"] == 0 else EXIT_FAIL


def cmd_spanner(args):
    balls = formats.read_balls(args.input)
    s = separation_for_stretch(args.t)
    _warn_s(s)
    sp = build_imprecise_spanner(balls, args.t)
    if args.out:
        with open(args.out, "w") as f:
            formats.write_edges(f, sp.edges)
    tol = tolerance()
    line = (f"n={sp.n} t={args.t:g} s={s:.6g} m={sp.stats['wspd_pairs']} edges={sp.edge_count} "
            f"build_ms={sp.stats['build_seconds'] * 1000:.1f}")
    if args.samples < 0:
        print(line)
        return EXIT_OK
    insts = _instances(balls, _strategies(args.strategy), args.samples, args.seed)
    results, partial = _dilations(balls, sp.edges, insts, args.threads, args.seed)
    worst = max(r.value for _, r in results)
    failed = sum(1 for _, r in results if not r.value <= args.t + tol)
    print(f"{line} max_dilation={worst:.12g}{' (sampled sources)' if partial else ''} "
          f"instances={len(results)} pass={len(results) - failed} fail={failed}")
    return EXIT_OK if failed == 0 else EXIT_FAIL


def cmd_verify(args):
    balls = formats.read_balls(args.input)
    if not args.wspd and not args.edges:
        raise UsageError("verify needs --wspd and/or --edges")
    report = VerificationReport()
    strategies = _strategies(args.strategy)
    tol = tolerance()
    if args.wspd:
        if args.s is None:
            raise UsageError("--wspd requires --s")
        with open(args.wspd) as f:
            pairs, _ = formats.loads_pairs(f.read())
        report.extend(check_coverage(pairs, balls.n))
        report.extend(check_definition2(pairs, balls, args.s))
        insts = [inst for _, inst in _instances(balls, strategies, args.samples, args.seed)]
        report.extend(check_lemma2_instances(pairs, insts, balls, args.s))
    if args.edges:
        if args.t is None:
            raise UsageError("--edges requires --t")
        with open(args.edges) as f:
            edges = formats.loads_edges(f.read())
        if edges.size and edges.max() >= balls.n:
            raise UsageError("edge id exceeds ball count")
        insts = _instances(balls, strategies, args.samples, args.seed)
        results, partial = _dilations(balls, edges, insts, args.threads, args.seed)
        for (label, inst), (_, r) in zip(insts, results):
            detail = f"{label} dilation={r.value:.12g} pair={r.pair}"
            if partial:
                detail += " (sampled sources)"
            elif balls.n <= MAX_ORACLE_VERTICES:
                ref = all_pairs_dilation_oracle(inst.points, edges)
                agree = (ref == r.value) or abs(ref - r.value) <= tol
                report.add(f"oracle agreement {label}", agree,
                           f"dijkstra={r.value:.12g} floyd={ref:.12g}", math.nan)
            report.add(f"stretch {label}", r.value <= args.t + tol, detail, args.t - r.value)
    sys.stdout.write(report.table())
    if args.out:
        with open(args.out, "w") as f:
            f.write(report.csv())
    for c in report.near_misses():
        print(f"warning: near miss in {c.name}: margin {c.margin:.3g}", file=sys.stderr)
    print(f"{len(report.checks) - len(report.failures)}/{len(report.checks)} checks passed")
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_lowerbound(args):
    rep = verify_completeness_required(args.n, args.t)
    if args.out:
        with open(args.out, "w") as f:
            f.write(rep.csv())
    if args.segments:
        with open(args.segments, "w") as f:
            f.write(formats.dumps_segments(generate_otn(args.n, args.t)))
    print(f"n={args.n} t={args.t:g}: {rep.summary()}, min margin {rep.min_margin:.6g}")
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_bench(args):
    sizes = [int(x) for x in args.sizes.split(",")]
    rows = ["n,m,edges,build_ms,max_dilation"]
    tol = tolerance()
    failed = 0
    for n in sizes:
        balls = random_disjoint_balls(n, args.dim, args.rmin, args.rmax, args.seed,
                                      density=args.density)
        sp = build_imprecise_spanner(balls, args.t)
        worst = math.nan
        if args.samples >= 0:
            insts = _instances(balls, ["centers", "boundary-random"], args.samples, args.seed)
            results, _ = _dilations(balls, sp.edges, insts, args.threads, args.seed)
            worst = max(r.value for _, r in results)
            failed += worst > args.t + tol
        rows.append(f"{n},{sp.stats['wspd_pairs']},{sp.edge_count},"
                    f"{sp.stats['build_seconds'] * 1000:.3f},{worst:.12g}")
        print(rows[-1], file=sys.stderr)
    text = "\n".join(rows) + "\n"
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if failed == 0 else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="impspan", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=True):
        if seed:
            sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", help="output path")
        sp.add_argument("--threads", type=int, default=1)

    def ball_gen_opts(sp):
        sp.add_argument("--dim", type=int, default=2)
        sp.add_argument("--rmin", type=float, default=1.0)
        sp.add_argument("--rmax", type=float, default=1.0)
        sp.add_argument("--density", type=float, default=0.1,
                        help="target fraction of the cube covered by balls")

    g = sub.add_parser("gen", help="random pairwise-disjoint balls")
    g.add_argument("--n", type=int, required=True)
    ball_gen_opts(g)
    common(g)
    g.set_defaults(func=cmd_gen)

    w = sub.add_parser("wspd", help="WSPD of a ball file")
    w.add_argument("--in", dest="input", required=True)
    w.add_argument("--s", type=float, required=True)
    w.add_argument("--dump-tree", help="write the split tree as indented text")
    common(w, seed=False)
    w.set_defaults(func=cmd_wspd)

    s = sub.add_parser("spanner", help="imprecise t-spanner of a ball file")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--t", type=float, required=True)
    s.add_argument("--samples", type=int, default=10,
                   help="random instances per strategy for the dilation report (-1 skips it)")
    s.add_argument("--strategy", default="all")
    common(s)
    s.set_defaults(func=cmd_spanner)

    v = sub.add_parser("verify", help="check WSPD and/or spanner artifacts")
    v.add_argument("--in", dest="input", required=True)
    v.add_argument("--wspd")
    v.add_argument("--edges")
    v.add_argument("--s", type=float)
    v.add_argument("--t", type=float)
    v.add_argument("--samples", type=int, default=20)
    v.add_argument("--strategy", default="all")
    common(v)
    v.set_defaults(func=cmd_verify)

    lb = sub.add_parser("lowerbound", help="check that O^t_n needs the complete graph")
    lb.add_argument("--n", type=int, required=True)
    lb.add_argument("--t", type=float, required=True)
    lb.add_argument("--segments", help="write segments as 'px py qx qy' lines")
    common(lb, seed=False)
    lb.set_defaults(func=cmd_lowerbound)

    b = sub.add_parser("bench", help="size/time sweep as CSV")
    b.add_argument("--sizes", default=",".join(str(2**k) for k in range(7, 13)))
    b.add_argument("--t", type=float, default=2.0)
    b.add_argument("--samples", type=int, default=3)
    ball_gen_opts(b)
    common(b)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    try:
        if getattr(args, "t", None) is not None and not args.t > 1:
            raise UsageError("--t must exceed 1")
        if getattr(args, "s", None) is not None and not args.s > 0:
            raise UsageError("--s must be positive")
        return args.func(args)
    except OverlapError as e:
        ids = " ".join(f"{i},{j}" for i, j in e.pairs)
        print(f"error: overlapping balls: {ids}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, GeometryError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
