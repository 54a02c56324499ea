"""Exact decision of assignment existence on typed orthogonality graphs."""
from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from ..orthograph import EdgeKind, OrthoGraph
from . import _kernel_py
from ._kernel_py import EQ, FORBID, IMPLIES, LE, SAT, TIMEOUT, UNSAT, Model
from .alphabet import Alphabet, Assignment, fmt_rational
from .check import check_assignment

try:
    if os.environ.get("KSFORGE_PURE"):
        raise ImportError("pure kernel forced")
    from . import _kernel as _ckernel  # type: ignore
except ImportError:
    _ckernel = None

KERNEL = "cython" if _ckernel is not None else "python"
C_MAX_D = 62
DEFAULT_NODES = 10**8
DEFAULT_SECONDS = 1800.0

_NAMES = {SAT: "SAT", UNSAT: "UNSAT", TIMEOUT: "TIMEOUT"}


class PinError(ValueError):
    pass


@dataclass(frozen=True)
class Budget:
    nodes: int = DEFAULT_NODES
    seconds: float = DEFAULT_SECONDS


@dataclass
class SolveResult:
    verdict: str
    certificate: Assignment | None = None
    nodes: int = 0
    seconds: float = 0.0
    kernel: str = KERNEL
    alphabet: Alphabet | None = None
    graph_name: str = ""

    @property
    def sat(self) -> bool:
        return self.verdict == "SAT"

    def to_certificate(self) -> dict:
        return {
            "graph": self.graph_name,
            "alphabet": self.alphabet.labels() if self.alphabet else [],
            "assignment": ({k: fmt_rational(v) for k, v in self.certificate.items()}
                           if self.certificate else {}),
            "verdict": self.verdict,
            "nodes": self.nodes,
            "seconds": round(self.seconds, 6),
        }


@dataclass
class Compiled:
    model: Model
    labels: tuple[str, ...]
    scopes: list[tuple[str, ...]]
    kinds: list[int]


def compile_graph(g: OrthoGraph, alpha: Alphabet, pins: Assignment | None = None) -> Compiled:
    weights, D = alpha.scaled()
    idx = g.index
    cons: list[tuple[int, list[int]]] = []
    basis_sets = set()
    for b in g.bases:
        cons.append((EQ, [idx[x] for x in b]))
        basis_sets.add(frozenset(b))
    for c in g.maximal_clique_indices():
        if len(c) >= 2 and frozenset(g.vertices[i] for i in c) not in basis_sets:
            cons.append((LE, list(c)))
    for e in g.edges:
        if e.kind is EdgeKind.FORBID11:
            cons.append((FORBID, [idx[e.u], idx[e.v]]))
        elif e.kind is EdgeKind.IMPLIES_INTERIOR:
            cons.append((IMPLIES, [idx[e.u], idx[e.v]]))
    allbits = (1 << len(weights)) - 1
    one = [k for k, w in enumerate(weights) if w == D]
    one_bit = 1 << one[0] if one else 0
    dom0 = [allbits] * len(g.vertices)
    for x in g.one_excluded:
        dom0[idx[x]] &= ~one_bit
    for lab, val in (pins or {}).items():
        if lab not in idx:
            raise PinError(f"pinned vertex {lab!r} not in graph")
        val = Fraction(val)
        if val not in alpha:
            raise PinError(f"pin {lab!r} = {val} outside alphabet {alpha}")
        dom0[idx[lab]] &= 1 << alpha.values.index(val)
    # descending ORTHO degree, ties by label
    order = sorted(range(len(g.vertices)), key=lambda i: (-len(g.adjacency_sets[i]), g.vertices[i]))
    rank = [0] * len(order)
    for r, i in enumerate(order):
        rank[i] = r
    model = Model(len(g.vertices), weights, D, cons, dom0, rank)
    scopes = [tuple(g.vertices[i] for i in scope) for _, scope in cons]
    return Compiled(model, g.vertices, scopes, [k for k, _ in cons])


def _run_kernel(model: Model, nodes: int, seconds: float, mrv: bool, kernel: str):
    if kernel == "cython" and _ckernel is not None and model.D <= C_MAX_D and len(model.weights) <= 16:
        return _ckernel.solve(model, nodes, seconds, mrv)
    return _kernel_py.solve(model, nodes, seconds, mrv)


def _decode(dom, alpha: Alphabet, labels) -> Assignment:
    return {lab: alpha.values[d.bit_length() - 1] for lab, d in zip(labels, dom)}


def search_assignment(g: OrthoGraph, alpha: Alphabet, pins: Assignment | None = None,
                      budget: Budget | None = None, *, threads: int = 1, mrv: bool = False,
                      kernel: str | None = None) -> SolveResult:
    """Decide whether an assignment exists; SAT certificates are always re-checked."""
    budget = budget or Budget()
    kernel = kernel or KERNEL
    t0 = time.perf_counter()
    comp = compile_graph(g, alpha, pins)
    if threads > 1:
        status, dom, nodes = _parallel(comp.model, budget, mrv, kernel, threads)
    else:
        status, dom, nodes = _run_kernel(comp.model, budget.nodes, budget.seconds, mrv, kernel)
    res = SolveResult(_NAMES[status], nodes=nodes, seconds=time.perf_counter() - t0,
                      kernel=kernel, alphabet=alpha, graph_name=g.name)
    if status == SAT:
        cert = _decode(dom, alpha, comp.labels)
        chk = check_assignment(g, cert, alpha)
        if not chk.ok:
            raise AssertionError(f"solver produced an invalid certificate: {chk.violations[:3]}")
        for lab, val in (pins or {}).items():
            if cert[lab] != Fraction(val):
                raise AssertionError(f"certificate ignores pin {lab!r}")
        res.certificate = cert
    return res


def _solve_branch(args):
    model, nodes, seconds, mrv, kernel = args
    return _run_kernel(model, nodes, seconds, mrv, kernel)


def _parallel(model: Model, budget: Budget, mrv: bool, kernel: str, threads: int):
    dom, conflict, _ = _kernel_py.root_propagate(model, trace=False)
    if conflict != -1:
        return UNSAT, None, 0
    free = [x for x in sorted(range(model.n), key=model.rank.__getitem__) if dom[x] & (dom[x] - 1)]
    if not free:
        return _run_kernel(model, budget.nodes, budget.seconds, mrv, kernel)
    x = free[0]
    branches = []
    m = dom[x]
    while m:
        b = 1 << (m.bit_length() - 1)
        m &= ~b
        sub = Model.__new__(Model)
        sub.__setstate__(model.__getstate__())
        sub.dom0 = list(dom)
        sub.dom0[x] = b
        branches.append(sub)
    with ProcessPoolExecutor(max_workers=min(threads, len(branches))) as ex:
        outs = list(ex.map(_solve_branch, [(s, budget.nodes, budget.seconds, mrv, kernel)
                                           for s in branches]))
    nodes = sum(o[2] for o in outs)
    # earliest branch in value order wins, so the verdict and certificate are stable
    for status, d, _ in outs:
        if status == SAT:
            return SAT, d, nodes
    if any(o[0] == TIMEOUT for o in outs):
        return TIMEOUT, None, nodes
    return UNSAT, None, nodes


@dataclass
class PropagationTrace:
    """Root-level propagation log; ``conflict`` is the wiped-out constraint."""

    conflict: tuple[str, ...] | None
    conflict_kind: str | None
    events: list[tuple[str, tuple[str, ...], str, list[str]]] = field(default_factory=list)

    @property
    def refuted(self) -> bool:
        return self.conflict is not None

    def touched(self) -> list[tuple[str, ...]]:
        seen = []
        for _, scope, _, _ in self.events:
            if scope not in seen:
                seen.append(scope)
        return seen

    def derivation(self) -> list[tuple[str, ...]]:
        """Constraints whose prunings feed the conflict, in firing order.

        Backward slice: a pruning matters if a later needed constraint reads
        the pruned vertex.
        """
        if self.conflict is None or self.conflict_kind == "pin":
            return []
        T = len(self.events)
        need = {x: T for x in self.conflict}
        keep = []
        for t in range(T - 1, -1, -1):
            _, scope, x, _ = self.events[t]
            if need.get(x, -1) > t:
                keep.append(scope)
                for y in scope:
                    if y != x:
                        need[y] = max(need.get(y, -1), t)
        out = []
        for scope in reversed(keep):
            if scope not in out:
                out.append(scope)
        if self.conflict not in out:
            out.append(self.conflict)
        return out

    def involves(self, labels) -> bool:
        key = set(labels)
        return any(set(s) == key for s in self.derivation())


_KIND_NAMES = {EQ: "basis", LE: "clique", FORBID: "FORBID11", IMPLIES: "IMPLIES_INTERIOR"}


def propagation_trace(g: OrthoGraph, alpha: Alphabet, pins: Assignment | None = None) -> PropagationTrace:
    comp = compile_graph(g, alpha, pins)
    dom, conflict, events = _kernel_py.root_propagate(comp.model, trace=True)
    out = []
    for ev in events:
        if ev[0] == "prune":
            _, c, x, removed = ev
            vals = [fmt_rational(alpha.values[k]) for k in range(len(alpha)) if removed >> k & 1]
            out.append(("prune", comp.scopes[c], comp.labels[x], vals))
    if conflict == -2:
        return PropagationTrace(("<pins>",), "pin", out)
    if conflict < 0:
        return PropagationTrace(None, None, out)
    return PropagationTrace(comp.scopes[conflict], _KIND_NAMES[comp.kinds[conflict]], out)
