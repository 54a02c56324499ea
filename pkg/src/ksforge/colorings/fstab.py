"""Vertices of the fractional stable set polytope of the ORTHO subgraph.

    FSTAB(G) = { x >= 0 : x_u + x_v <= 1 for every ORTHO edge uv }

Vertices are enumerated with the double-description method (cddlib, floating
point).  Each reported vertex is then recomputed exactly from its tight rows
with Fractions and must be the unique solution of them, so the
half-integrality verdict never relies on rounding.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import cdd
import numpy as np

from ..orthograph import OrthoGraph

PROBE_CAP = 20
EPS = 1e-9
HALF_VALUES = {Fraction(0), Fraction(1, 2), Fraction(1)}


class TooLarge(ValueError):
    pass


@dataclass
class HalfIntegralityReport:
    n: int
    edges: int
    vertices: list[tuple[Fraction, ...]]
    generators: int
    all_half_integral: bool
    offenders: list[tuple[Fraction, ...]] = field(default_factory=list)

    def summary(self) -> str:
        tag = "half-integral" if self.all_half_integral else "NOT half-integral"
        return f"{len(self.vertices)} vertices: {tag}"


def _edge_index(g: OrthoGraph) -> list[tuple[int, int]]:
    out = set()
    for i, nb in enumerate(g.adjacency_sets):
        for j in nb:
            if i < j:
                out.add((i, j))
    return sorted(out)


def _snap(x: np.ndarray, E: np.ndarray, isolated, max_den: int = 1 << 12) -> tuple[Fraction, ...] | None:
    """Rational point near ``x``, accepted only if its tight rows (checked
    exactly, in integers over a common denominator) determine it uniquely and
    it lies in the polytope."""
    n = len(x)
    pt = tuple(Fraction(float(c)).limit_denominator(max_den) for c in x)
    L = math.lcm(*(c.denominator for c in pt))
    N = np.array([c.numerator * (L // c.denominator) for c in pt], dtype=np.int64)
    if (N < 0).any() or (N > L).any():
        return None
    s = N[E[:, 0]] + N[E[:, 1]] if len(E) else np.zeros(0, np.int64)
    if (s > L).any():
        return None
    I = np.eye(n)
    A = [I[N == 0], I[[i for i in isolated if N[i] == L]]]
    if len(E):
        T = E[s == L]
        R = np.zeros((len(T), n))
        R[np.arange(len(T)), T[:, 0]] = 1
        R[np.arange(len(T)), T[:, 1]] = 1
        A.append(R)
    A = np.vstack(A)
    if len(A) == 0 or np.linalg.matrix_rank(A) != n:
        # the tight rows leave a direction free: not a vertex
        return None
    return pt


def _in_polytope(x, edges) -> bool:
    return all(0 <= v <= 1 for v in x) and all(x[u] + x[v] <= 1 for u, v in edges)


def half_integrality_probe(g: OrthoGraph, *, cap: int = PROBE_CAP) -> HalfIntegralityReport:
    n = len(g.vertices)
    if n > cap:
        raise TooLarge(f"{n} vertices exceeds probe cap {cap}")
    edges = _edge_index(g)
    m = len(edges)
    # H-representation rows [b | -A] for A x <= b
    rows = [[0] + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    rows += [[1] + [-1 if j in e else 0 for j in range(n)] for e in edges]
    # x_i <= 1 is implied by any incident edge; isolated vertices need it
    isolated = [i for i in range(n) if not g.adjacency_sets[i]]
    rows += [[1] + [-1 if j == i else 0 for j in range(n)] for i in isolated]
    P = cdd.polyhedron_from_matrix(cdd.matrix_from_array(rows, rep_type=cdd.RepType.INEQUALITY))
    gens = cdd.copy_generators(P).array
    if any(r[0] != 1 for r in gens):
        raise ArithmeticError("FSTAB reported an unbounded direction")
    E = np.array(edges, dtype=np.int64).reshape(-1, 2)
    verts = set()
    for r in gens:
        x = np.asarray(r[1:], float)
        pt = _snap(x, E, isolated)
        if pt is None:
            raise ArithmeticError("enumerated vertex does not reconstruct exactly")
        verts.add(pt)
    verts = sorted(verts)
    bad = [v for v in verts if any(c not in HALF_VALUES for c in v)]
    return HalfIntegralityReport(n, m, verts, len(gens), not bad, bad)


def tight_subset_vertices(g: OrthoGraph, *, cap: int = 9) -> list[tuple[Fraction, ...]]:
    """Oracle: every n-subset of constraints with a unique feasible solution.

    Solutions come from batched float solves, are snapped to rationals and
    accepted only if they satisfy the chosen rows and the polytope exactly.
    """
    n = len(g.vertices)
    if n > cap:
        raise TooLarge(f"{n} vertices exceeds oracle cap {cap}")
    edges = _edge_index(g)
    rows = []
    for i in range(n):
        r = np.zeros(n)
        r[i] = 1
        rows.append((r, 0.0))
    for u, v in edges:
        r = np.zeros(n)
        r[u] = r[v] = 1
        rows.append((r, 1.0))
    isolated = [i for i in range(n) if not g.adjacency_sets[i]]
    for i in isolated:
        r = np.zeros(n)
        r[i] = 1
        rows.append((r, 1.0))
    R = np.array([r for r, _ in rows])
    rb = np.array([c for _, c in rows])
    out = set()
    combos = np.array(list(itertools.combinations(range(len(rows)), n)), dtype=np.int64)
    for s in range(0, len(combos), 20000):
        C = combos[s:s + 20000]
        M = R[C]
        rhs = rb[C]
        det = np.linalg.det(M)
        ok = np.abs(det) > 1e-9
        if not ok.any():
            continue
        X = np.linalg.solve(M[ok], rhs[ok][..., None])[..., 0]
        for x, chosen in zip(X, C[ok]):
            fx = tuple(Fraction(float(c)).limit_denominator(1 << 12) for c in x)
            if not _in_polytope(fx, edges):
                continue
            good = True
            for idx in chosen:
                if idx < n:
                    good &= fx[idx] == 0
                elif idx < n + len(edges):
                    u, v = edges[idx - n]
                    good &= fx[u] + fx[v] == 1
                else:
                    good &= fx[isolated[idx - n - len(edges)]] == 1
            if good:
                out.add(fx)
    return sorted(out)
