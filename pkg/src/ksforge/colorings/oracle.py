"""Brute-force enumeration of every valid assignment (reference oracle).

Candidates are generated in mixed-radix blocks and screened with numpy on
integer-scaled values; every survivor is then confirmed by
:func:`check_assignment`.  Nothing here shares code with the search kernel.
"""
from __future__ import annotations

import numpy as np

from ..orthograph import EdgeKind, OrthoGraph
from .alphabet import Alphabet, Assignment
from .check import check_assignment

ORACLE_CAP = 10**8
BLOCK = 1 << 18


class TooLarge(ValueError):
    pass


def _candidates(n: int, k: int, start: int, stop: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((len(idx), n), dtype=np.int64)
    for j in range(n - 1, -1, -1):
        out[:, j] = idx % k
        idx //= k
    return out


def iter_valid(g: OrthoGraph, alpha: Alphabet):
    n = len(g.vertices)
    k = len(alpha)
    total = k ** n
    if total > ORACLE_CAP:
        raise TooLarge(f"{k}^{n} candidates")
    weights, D = alpha.scaled()
    w = np.asarray(weights, dtype=np.int64)
    ix = g.index
    cliques = [np.array([ix[x] for x in c]) for c in g.clique_report().maximal_cliques]
    bases = [np.array([ix[x] for x in b]) for b in g.bases]
    forbid = [(ix[e.u], ix[e.v]) for e in g.edges_of(EdgeKind.FORBID11)]
    implies = [(ix[e.u], ix[e.v]) for e in g.edges_of(EdgeKind.IMPLIES_INTERIOR)]
    unary = [ix[x] for x in g.one_excluded]
    for start in range(0, total, BLOCK):
        vals = w[_candidates(n, k, start, min(total, start + BLOCK))]
        ok = np.ones(len(vals), dtype=bool)
        for c in cliques:
            ok &= vals[:, c].sum(axis=1) <= D
        for b in bases:
            ok &= vals[:, b].sum(axis=1) == D
        for u, v in forbid:
            ok &= ~((vals[:, u] == D) & (vals[:, v] == D))
        for u, v in implies:
            ok &= ~((vals[:, u] == D) & ((vals[:, v] == 0) | (vals[:, v] == D)))
        for u in unary:
            ok &= vals[:, u] != D
        for row in vals[ok]:
            a = {lab: alpha.values[weights.index(int(x))] for lab, x in zip(g.vertices, row)}
            if not check_assignment(g, a, alpha).ok:
                raise AssertionError(f"screen and checker disagree on {a}")
            yield a


def exhaustive_oracle(g: OrthoGraph, alpha: Alphabet, *, limit: int | None = None) -> list[Assignment]:
    """All valid assignments (or the first ``limit`` of them)."""
    out = []
    for a in iter_valid(g, alpha):
        out.append(a)
        if limit is not None and len(out) >= limit:
            break
    return out
