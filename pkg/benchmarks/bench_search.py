"""Compiled vs pure-Python search kernel on the same compiled models.

    python3 benchmarks/bench_search.py [--repeat 3]
"""
from __future__ import annotations

import argparse
import itertools
import random
import statistics
import time
from fractions import Fraction

from ksforge.colorings import HALF, ZERO_ONE, Alphabet, search_assignment
from ksforge.colorings import search as S
from ksforge.corpus import load_corpus
from ksforge.gadgets import CASE_II, assemble_gks, build_s3, solve_s3_angles
from ksforge.orthograph import graph_from_edges, graph_from_vectors


def random_graph(n: int, m: int, seed: int):
    rng = random.Random(seed)
    labels = [f"x{i}" for i in range(n)]
    pairs = set()
    while len(pairs) < m:
        a, b = rng.sample(range(n), 2)
        pairs.add((min(a, b), max(a, b)))
    return graph_from_edges(3, labels, [(labels[a], labels[b]) for a, b in sorted(pairs)],
                            name=f"G({n},{m})#{seed}")


def flower_snark_stars(k: int):
    """Edges of the flower snark J_k as vertices, its vertex stars as bases.

    Over {0, p, 1-p} each basis must use every value once, i.e. a proper
    3-edge-colouring, which a snark does not have.  Propagation alone cannot
    see this, so the tree grows roughly 4x per step in k.
    """
    E = []
    for i in range(k):
        j = (i + 1) % k
        E += [(f"a{i}", f"b{i}"), (f"a{i}", f"c{i}"), (f"a{i}", f"d{i}"), (f"b{i}", f"b{j}")]
    cyc = [f"c{i}" for i in range(k)] + [f"d{i}" for i in range(k)]
    E += [(cyc[i], cyc[(i + 1) % (2 * k)]) for i in range(2 * k)]
    labels = [f"{u}-{v}" for u, v in E]
    stars: dict[str, list[str]] = {}
    for lab, (u, v) in zip(labels, E):
        stars.setdefault(u, []).append(lab)
        stars.setdefault(v, []).append(lab)
    pairs = sorted({tuple(sorted(pr)) for s in stars.values() for pr in itertools.combinations(s, 2)})
    return graph_from_edges(3, labels, pairs, name=f"J{k}")


def cases():
    peres = graph_from_vectors(load_corpus("peres33").vectors)
    cab = graph_from_vectors(load_corpus("cabello18").vectors)
    s3 = graph_from_vectors(build_s3(solve_s3_angles()))
    gks = assemble_gks(search=False).graph
    q = Alphabet.O(Fraction(1, 4), 3)
    out = [
        ("peres33 {0,1}", peres, ZERO_ONE, None),
        ("peres33 {0,1/2,1}", peres, HALF, None),
        ("cabello18 {0,1}", cab, ZERO_ONE, None),
        ("S3 case ii O(1/4)", s3, Alphabet.O(Fraction(1, 4), 3, include_one=False), {x: 0 for x in CASE_II}),
        ("GKS typed O(1/4)", gks, q, None),
    ]
    for seed in range(2):
        out.append((f"random G(60,150) #{seed} {{0,1}}", random_graph(60, 150, seed), ZERO_ONE, None))
    no_one = Alphabet.O(Fraction(1, 4), 3, include_one=False)
    for k in (7, 9, 11, 13):
        out.append((f"flower snark J{k} {{0,1/4,3/4}}", flower_snark_stars(k), no_one, None))
    return out


def timed(g, alpha, pins, kernel, repeat):
    ts = []
    res = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        res = search_assignment(g, alpha, pins, kernel=kernel)
        ts.append(time.perf_counter() - t0)
    return statistics.median(ts), res


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if S._ckernel is None:
        print("compiled kernel not built; only the Python kernel is available")
    print(f"{'instance':34s} {'verdict':8s} {'nodes':>8s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for name, g, alpha, pins in cases():
        tp, rp = timed(g, alpha, pins, "python", args.repeat)
        if S._ckernel is not None:
            tc, rc = timed(g, alpha, pins, "cython", args.repeat)
            assert rc.verdict == rp.verdict and rc.certificate == rp.certificate
            print(f"{name:34s} {rp.verdict:8s} {rp.nodes:8d} {tp:10.4f} {tc:10.4f} {tp / tc:8.1f}")
        else:
            print(f"{name:34s} {rp.verdict:8s} {rp.nodes:8d} {tp:10.4f} {'-':>10s}")


if __name__ == "__main__":
    main()
