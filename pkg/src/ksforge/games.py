"""Pseudo-telepathy games built from complete orthogonal bases.

Each player receives a basis and answers with one of its d rays.  With a
maximally entangled state both players, measuring bases x and y, see ray pair
(a, b) with probability |<x_a|y_b>|^2 / d.  The game is won exactly on the
pairs this behavior can produce, so the quantum strategy is perfect by
construction; what remains interesting is whether anything weaker also wins
every round.

* classical players win perfectly iff the set has a {0,1} assignment;
* a perfect strategy aided by one PR-type box yields a {0,1/2,1} assignment,
  so UNSAT over {0,1/2,1} refutes every such strategy.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .colorings import HALF, ZERO_ONE, Budget, search_assignment
from .colorings.search import SolveResult
from .geometry import VectorSet, cross, union_sets
from .orthograph import EdgeKind, OrthoGraph, graph_from_vectors

BRUTE_FORCE_CAP = 12
LEAK_TOL = 1e-12


class NotCompleted(ValueError):
    pass


class PredicateLeak(AssertionError):
    def __init__(self, where, mass):
        super().__init__(f"quantum mass {mass:.3g} on losing tuple {where}")
        self.where = where
        self.mass = mass


class TooLargeForBruteForce(ValueError):
    pass


class MalformedBehavior(ValueError):
    pass


def complete_bases(s: VectorSet, *, max_rounds: int = 10) -> VectorSet:
    """Add the cross product of every orthogonal pair not inside a basis.

    Repeats until every ORTHO edge lies in a basis (new rays can create new
    bare pairs).
    """
    if s.dim != 3:
        raise ValueError("completion is defined for d = 3")
    cur = s
    for _ in range(max_rounds):
        g = graph_from_vectors(cur)
        c2 = [c for c in g.maximal_clique_indices() if len(c) == 2]
        if not c2:
            return cur
        V = g.vertices
        new = [cross(g.vectors[V[i]], g.vectors[V[j]], f"c({V[i]},{V[j]})") for i, j in c2]
        cur = union_sets([cur, VectorSet.from_raw("completion", [(v.label, v.components) for v in new],
                                                  tol=cur.tol, dedupe=True)], name=s.name)
    raise RuntimeError("completion did not converge")


def bare_edges(g: OrthoGraph) -> list[tuple[str, str]]:
    covered = set()
    for b in g.bases:
        for u, v in itertools.combinations(b, 2):
            covered.add(frozenset((u, v)))
    return [(e.u, e.v) for e in g.edges_of(EdgeKind.ORTHO) if frozenset((e.u, e.v)) not in covered]


@dataclass
class NonlocalGame:
    """Inputs X = Y = bases; ``win[i, j]`` is the d x d predicate for (X[i], Y[j])."""

    vectors: VectorSet
    X: list[tuple[str, ...]]
    Y: list[tuple[str, ...]]
    win: np.ndarray  # bool, shape (|X|, |Y|, d, d)
    graph: OrthoGraph
    tol: float = 1e-9

    @property
    def d(self) -> int:
        return self.win.shape[2]

    def V(self, a: int, b: int, x: int, y: int) -> int:
        return int(self.win[x, y, a, b])

    def to_dict(self) -> dict:
        wins = [[i, j, a, b] for i, j, a, b in zip(*np.nonzero(self.win))]
        return {"inputs": [list(x) for x in self.X], "d": self.d,
                "winning": [list(map(int, w)) for w in wins]}


def _amplitudes(game_vectors: VectorSet, X, Y) -> np.ndarray:
    M = {v.label: v.array for v in game_vectors}
    A = np.array([[M[l] for l in x] for x in X])  # (nx, d, dim)
    B = np.array([[M[l] for l in y] for y in Y])
    return np.einsum("iak,jbk->ijab", A, B)


def build_pt_game(s: VectorSet | OrthoGraph, *, one_excluded=()) -> NonlocalGame:
    """Game on all bases of a completed set.

    ``one_excluded`` ("all" or labels) carries typed one-exclusion into the
    underlying graph used by the refutations.
    """
    if isinstance(s, OrthoGraph):
        g = s
        vs = VectorSet(g.name, g.dim, tuple(g.vectors[v] for v in g.vertices), g.tol)
    else:
        vs = s
        g = graph_from_vectors(s)
    # orthogonal pairs across bases are enforced by the predicate itself, so
    # the game only needs every ray to be askable
    on_basis = {x for b in g.bases for x in b}
    orphans = [v for v in g.vertices if v not in on_basis]
    if orphans:
        raise NotCompleted(f"{len(orphans)} rays lie in no basis, e.g. {orphans[0]!r}")
    if one_excluded == "all":
        g = g.replace(one_excluded=set(g.vertices))
    elif one_excluded:
        g = g.replace(one_excluded=g.one_excluded | set(one_excluded))
    X = [tuple(b) for b in g.bases]
    amp = _amplitudes(vs, X, X)
    win = np.abs(amp) > g.tol
    return NonlocalGame(vs, X, list(X), win, g, g.tol)


@dataclass
class Behavior:
    """P[x, y, a, b]; entries may be Fractions (object array) or floats."""

    P: np.ndarray
    tol: float = 1e-9

    def marginals(self):
        return self.P.sum(axis=3), self.P.sum(axis=2)

    def validate(self):
        exact = self.P.dtype == object
        tot = self.P.sum(axis=(2, 3))
        one = np.ones_like(tot) if not exact else np.full(tot.shape, Fraction(1), dtype=object)
        if exact:
            if not all(t == 1 for t in tot.ravel()):
                raise MalformedBehavior("rows not normalized")
        elif np.abs(tot - one).max() > self.tol:
            raise MalformedBehavior("rows not normalized")
        if (self.P < 0).any():
            raise MalformedBehavior("negative probability")
        pa, pb = self.marginals()
        # Alice's marginal may not depend on y, Bob's not on x
        for m, axis in ((pa, 1), (pb, 0)):
            ref = np.take(m, [0], axis=axis)
            diff = m - ref
            bad = any(x != 0 for x in diff.ravel()) if exact else np.abs(diff.astype(float)).max() > self.tol
            if bad:
                raise MalformedBehavior("signaling marginals")


def quantum_behavior(g: NonlocalGame) -> Behavior:
    amp = _amplitudes(g.vectors, g.X, g.Y)
    return Behavior(amp ** 2 / g.d, g.tol)


def evaluate_behavior(g: NonlocalGame, b: Behavior):
    """Uniform-input winning probability; exact Fraction for exact behaviors."""
    b.validate()
    n = len(g.X) * len(g.Y)
    if b.P.dtype == object:
        tot = sum((p for p, w in zip(b.P.ravel(), g.win.ravel()) if w), Fraction(0))
        return tot / n
    return float((b.P * g.win).sum() / n)


def quantum_value_check(g: NonlocalGame) -> bool:
    """No quantum mass on losing tuples, hence omega = 1 within tolerance."""
    P = quantum_behavior(g).P
    leak = np.where(g.win, 0.0, P)
    if leak.max() > LEAK_TOL:
        i, j, a, b = np.unravel_index(int(np.argmax(leak)), leak.shape)
        raise PredicateLeak((g.X[i], g.Y[j], g.X[i][a], g.Y[j][b]), float(leak.max()))
    omega = float((P * g.win).sum() / (len(g.X) * len(g.Y)))
    tot = P.sum(axis=(2, 3))
    return abs(omega - 1) < 1e-9 and np.abs(tot - 1).max() < 1e-9


def deterministic_behavior(g: NonlocalGame, c1, c2) -> Behavior:
    nx, ny, d = len(g.X), len(g.Y), g.d
    P = np.full((nx, ny, d, d), Fraction(0), dtype=object)
    for i in range(nx):
        for j in range(ny):
            P[i, j, c1[i], c2[j]] = Fraction(1)
    return Behavior(P)


@dataclass
class StrategyVerdict:
    cls: str  # CLASSICAL | PR_AUGMENTED
    perfect: bool
    witness: dict | None = None
    certificate: dict = field(default_factory=dict)

    @property
    def label(self) -> str:
        return "perfect" if self.perfect else "not perfect"

    def to_dict(self) -> dict:
        return {"class": self.cls, "perfect": self.perfect, "verdict": self.label,
                "witness": self.witness, "certificate": self.certificate}


def _brute_force(g: NonlocalGame):
    """Backtracking over one shared answer per basis; the diagonal rule forces c1 = c2."""
    n, d = len(g.X), g.d
    diag_ok = all(g.win[i, i, a, a] for i in range(n) for a in range(d))
    if not diag_ok:
        return None, 0
    c = [-1] * n
    visited = 0
    i = 0
    while 0 <= i < n:
        c[i] += 1
        if c[i] >= d:
            c[i] = -1
            i -= 1
            continue
        visited += 1
        a = c[i]
        if all(g.win[i, j, a, c[j]] and g.win[j, i, c[j], a] for j in range(i)):
            i += 1
    return (list(c) if i == n else None), visited


def _coloring_strategy(g: NonlocalGame, cert) -> list[int]:
    return [next(k for k, lab in enumerate(x) if cert[lab] == 1) for x in g.X]


def refute_classical(g: NonlocalGame, mode: str = "coloring", budget: Budget | None = None) -> StrategyVerdict:
    if mode == "brute_force":
        if len(g.X) > BRUTE_FORCE_CAP:
            raise TooLargeForBruteForce(f"|X| = {len(g.X)} > {BRUTE_FORCE_CAP}")
        c, visited = _brute_force(g)
        if c is not None:
            return StrategyVerdict("CLASSICAL", True, {"c1": c, "c2": c}, {"method": "brute_force"})
        return StrategyVerdict("CLASSICAL", False, None, {"method": "brute_force", "visited": visited})
    if mode != "coloring":
        raise ValueError(mode)
    # classical strategies see no typed one-exclusion; only the ORTHO graph matters
    r = search_assignment(g.graph.replace(one_excluded=set()), ZERO_ONE, None, budget)
    return _from_result("CLASSICAL", g, r)


def _from_result(cls: str, g: NonlocalGame, r: SolveResult) -> StrategyVerdict:
    cert = r.to_certificate()
    cert["graph_digest"] = g.graph.digest()
    if r.verdict == "TIMEOUT":
        raise TimeoutError(f"{cls} refutation hit the search budget after {r.nodes} nodes")
    if r.sat:
        wit = {"assignment": cert["assignment"]}
        if cls == "CLASSICAL":
            strat = _coloring_strategy(g, r.certificate)
            wit.update({"c1": strat, "c2": strat})
        return StrategyVerdict(cls, True, wit, cert)
    return StrategyVerdict(cls, False, None, cert)


def refute_pr_augmented(g: NonlocalGame, budget: Budget | None = None) -> StrategyVerdict:
    """perfect = a {0,1/2,1} assignment exists (necessary condition only)."""
    r = search_assignment(g.graph, HALF, None, budget)
    return _from_result("PR_AUGMENTED", g, r)


def sample_classical(g: NonlocalGame, n: int = 200, seed: int = 0) -> Fraction:
    """Best uniform-input value over random deterministic strategy pairs."""
    rng = random.Random(seed)
    best = Fraction(0)
    for _ in range(n):
        c1 = [rng.randrange(g.d) for _ in g.X]
        c2 = [rng.randrange(g.d) for _ in g.Y]
        best = max(best, evaluate_behavior(g, deterministic_behavior(g, c1, c2)))
    return best
