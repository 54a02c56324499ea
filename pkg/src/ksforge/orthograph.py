"""Typed orthogonality graphs: vertices are rays, edges record orthogonality
or a gadget-derived constraint, and bases are the cached d-cliques."""
from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .geometry import DEFAULT_TOL, UnitVector, VectorSet, overlap

CLIQUE_CAP = 10_000


class GraphError(ValueError):
    pass


class NotOrthogonal(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class SizeLimit(GraphError):
    pass


class EdgeKind(str, Enum):
    ORTHO = "ORTHO"
    FORBID11 = "FORBID11"
    IMPLIES_INTERIOR = "IMPLIES_INTERIOR"

    @property
    def directed(self) -> bool:
        return self is EdgeKind.IMPLIES_INTERIOR


@dataclass(frozen=True)
class Edge:
    u: str
    v: str
    kind: EdgeKind

    def key(self):
        if self.kind.directed:
            return (self.kind, self.u, self.v)
        return (self.kind,) + tuple(sorted((self.u, self.v)))


@dataclass(frozen=True)
class CliqueReport:
    maximal_cliques: tuple[tuple[str, ...], ...]
    clique_number: int


class OrthoGraph:
    """Immutable typed graph.  ``one_excluded`` lists vertices which a verified
    gadget prevents from taking the value 1 (a unary typed constraint)."""

    def __init__(self, dim: int, vertices: Sequence[str], edges: Iterable[Edge] = (),
                 bases: Sequence[Sequence[str]] | None = None, *,
                 vectors: dict[str, UnitVector] | None = None, name: str = "graph",
                 tol: float = DEFAULT_TOL, one_excluded: Iterable[str] = (),
                 validate: bool = True):
        self.dim = int(dim)
        self.name = name
        self.tol = tol
        self.vertices = tuple(vertices)
        self.index = {v: i for i, v in enumerate(self.vertices)}
        if len(self.index) != len(self.vertices):
            raise GraphError("duplicate vertex labels")
        self.vectors = dict(vectors or {})
        seen = {}
        for e in edges:
            e = Edge(e.u, e.v, EdgeKind(e.kind))
            if e.u == e.v:
                raise GraphError(f"self-loop on {e.u!r}")
            for x in (e.u, e.v):
                if x not in self.index:
                    raise GraphError(f"unknown vertex {x!r}")
            if validate and e.kind is EdgeKind.ORTHO:
                self._check_ortho(e.u, e.v)
            k = e.key()
            if k in seen:
                raise DuplicateEdge(f"{e.kind.value} edge {e.u!r}-{e.v!r} already present")
            seen[k] = e
        self.edges = tuple(seen.values())
        self.one_excluded = frozenset(one_excluded)
        for x in self.one_excluded:
            if x not in self.index:
                raise GraphError(f"unknown vertex {x!r}")
        adj = [set() for _ in self.vertices]
        for e in self.edges:
            if e.kind is EdgeKind.ORTHO:
                i, j = self.index[e.u], self.index[e.v]
                adj[i].add(j)
                adj[j].add(i)
        self._adj = adj
        if bases is None:
            self.bases = tuple(c for c in self.maximal_clique_indices() if len(c) == self.dim)
            self.bases = tuple(tuple(self.vertices[i] for i in c) for c in self.bases)
        else:
            self.bases = tuple(tuple(b) for b in bases)
            if validate:
                for b in self.bases:
                    self._check_basis(b)

    # -- validation -------------------------------------------------------
    def _check_ortho(self, u: str, v: str) -> None:
        a, b = self.vectors.get(u), self.vectors.get(v)
        if a is not None and b is not None and overlap(a, b) >= self.tol:
            raise NotOrthogonal(f"{u!r} and {v!r} have overlap {overlap(a, b):.3g}")

    def _check_basis(self, b: Sequence[str]) -> None:
        if len(b) != self.dim or len(set(b)) != self.dim:
            raise GraphError(f"basis {b} does not have {self.dim} distinct members")
        for x, y in itertools.combinations(b, 2):
            if self.index[y] not in self._adj[self.index[x]]:
                raise GraphError(f"basis {b} is not an ORTHO clique")

    # -- queries ------------------------------------------------------------
    def __len__(self):
        return len(self.vertices)

    def ortho_neighbors(self, label: str) -> list[str]:
        return [self.vertices[j] for j in sorted(self._adj[self.index[label]])]

    def ortho_degree(self, label: str) -> int:
        return len(self._adj[self.index[label]])

    def adjacent(self, u: str, v: str) -> bool:
        return self.index[v] in self._adj[self.index[u]]

    def edges_of(self, kind: EdgeKind) -> list[Edge]:
        return [e for e in self.edges if e.kind is kind]

    @property
    def adjacency_sets(self) -> list[set[int]]:
        return self._adj

    def maximal_clique_indices(self) -> list[tuple[int, ...]]:
        return self._cliques

    @cached_property
    def _cliques(self) -> list[tuple[int, ...]]:
        if len(self.vertices) > CLIQUE_CAP:
            raise SizeLimit(f"{len(self.vertices)} vertices exceeds cap {CLIQUE_CAP}")
        return bron_kerbosch(self._adj)

    def clique_report(self) -> CliqueReport:
        cl = tuple(tuple(self.vertices[i] for i in c) for c in self._cliques)
        return CliqueReport(cl, max((len(c) for c in cl), default=0))

    def digest(self) -> str:
        return hashlib.sha256(json.dumps(self.to_dict(), sort_keys=True).encode()).hexdigest()[:16]

    # -- derived graphs -----------------------------------------------------
    def replace(self, **kw) -> "OrthoGraph":
        args = dict(dim=self.dim, vertices=self.vertices, edges=self.edges, bases=self.bases,
                    vectors=self.vectors, name=self.name, tol=self.tol,
                    one_excluded=self.one_excluded, validate=False)
        args.update(kw)
        return OrthoGraph(**args)

    def induced(self, labels: Iterable[str], name: str | None = None) -> "OrthoGraph":
        keep = set(labels)
        verts = [v for v in self.vertices if v in keep]
        edges = [e for e in self.edges if e.u in keep and e.v in keep]
        bases = [b for b in self.bases if all(x in keep for x in b)]
        return OrthoGraph(self.dim, verts, edges, bases,
                          vectors={v: self.vectors[v] for v in verts if v in self.vectors},
                          name=name or self.name, tol=self.tol,
                          one_excluded=self.one_excluded & keep, validate=False)

    def __eq__(self, other):
        if not isinstance(other, OrthoGraph):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __repr__(self):
        return (f"OrthoGraph({self.name!r}, n={len(self.vertices)}, edges={len(self.edges)}, "
                f"bases={len(self.bases)})")

    # -- serialization --------------------------------------------------------
    def to_dict(self) -> dict:
        verts = []
        for v in self.vertices:
            item = {"label": v}
            if v in self.vectors:
                item["vector"] = list(self.vectors[v].components)
            verts.append(item)
        out = {
            "name": self.name,
            "dim": self.dim,
            "tol": self.tol,
            "vertices": verts,
            "edges": [{"u": e.u, "v": e.v, "kind": e.kind.value} for e in self.edges],
            "bases": [list(b) for b in self.bases],
        }
        if self.one_excluded:
            out["one_excluded"] = sorted(self.one_excluded, key=self.index.__getitem__)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "OrthoGraph":
        vectors = {}
        labels = []
        for item in data["vertices"]:
            labels.append(item["label"])
            if item.get("vector") is not None:
                vectors[item["label"]] = UnitVector(item["label"], tuple(float(c) for c in item["vector"]))
        edges = [Edge(e["u"], e["v"], EdgeKind(e["kind"])) for e in data["edges"]]
        return cls(int(data["dim"]), labels, edges, data.get("bases"), vectors=vectors,
                   name=data.get("name", "graph"), tol=float(data.get("tol", DEFAULT_TOL)),
                   one_excluded=data.get("one_excluded", ()))


def bron_kerbosch(adj: Sequence[set[int]]) -> list[tuple[int, ...]]:
    """All maximal cliques (Tomita pivoting), each sorted, list sorted."""
    out: list[tuple[int, ...]] = []
    n = len(adj)
    # iterative to stay clear of the recursion limit on large sparse graphs
    stack = [(frozenset(), frozenset(range(n)), frozenset())]
    while stack:
        R, P, X = stack.pop()
        if not P:
            if not X:
                out.append(tuple(sorted(R)))
            continue
        pivot = max(P | X, key=lambda u: (len(adj[u] & P), -u))
        for v in sorted(P - adj[pivot], reverse=True):
            stack.append((R | {v}, P & adj[v], X & adj[v]))
            P = P - {v}
            X = X | {v}
    out.sort()
    return out


def graph_from_vectors(s: VectorSet, *, name: str | None = None, tol: float | None = None) -> OrthoGraph:
    if not len(s):
        raise GraphError("empty vector set")
    tol = s.tol if tol is None else tol
    M = s.matrix()
    G = np.abs(M @ M.T) < tol
    np.fill_diagonal(G, False)
    labels = s.labels
    edges = [Edge(labels[i], labels[j], EdgeKind.ORTHO)
             for i, j in zip(*np.nonzero(np.triu(G, 1)))]
    return OrthoGraph(s.dim, labels, edges, None, vectors={v.label: v for v in s},
                      name=name or s.name, tol=tol, validate=False)


def graph_from_edges(dim: int, vertices: Sequence[str], pairs: Iterable[tuple[str, str]],
                     *, name: str = "graph", bases: Sequence[Sequence[str]] | None = None) -> OrthoGraph:
    """Abstract graph from ORTHO pairs; bases default to maximal cliques of size ``dim``."""
    edges = [Edge(u, v, EdgeKind.ORTHO) for u, v in pairs]
    return OrthoGraph(dim, vertices, edges, bases, name=name)


def enumerate_maximal_cliques(g: OrthoGraph) -> CliqueReport:
    return g.clique_report()


def add_typed_edge(g: OrthoGraph, u: str, v: str, kind: EdgeKind | str) -> OrthoGraph:
    kind = EdgeKind(kind)
    if u == v:
        raise GraphError("self-loop")
    for x in (u, v):
        if x not in g.index:
            raise GraphError(f"unknown vertex {x!r}")
    e = Edge(u, v, kind)
    if any(f.key() == e.key() for f in g.edges):
        raise DuplicateEdge(f"{kind.value} edge {u!r}-{v!r} already present")
    if kind is EdgeKind.ORTHO:
        g._check_ortho(u, v)
        # bases may change when an ORTHO edge appears
        h = OrthoGraph(g.dim, g.vertices, g.edges + (e,), None, vectors=g.vectors, name=g.name,
                       tol=g.tol, one_excluded=g.one_excluded, validate=False)
        return h
    return g.replace(edges=g.edges + (e,))


def mark_one_excluded(g: OrthoGraph, labels: Iterable[str]) -> OrthoGraph:
    return g.replace(one_excluded=g.one_excluded | set(labels))


def export_graph(g: OrthoGraph, format: str = "json") -> bytes:
    if format == "json":
        return json.dumps(g.to_dict(), indent=1).encode()
    if format == "dimacs":
        ortho = g.edges_of(EdgeKind.ORTHO)
        lines = [f"c {g.name}", f"p edge {len(g.vertices)} {len(ortho)}"]
        lines += [f"c v {i + 1} {v}" for i, v in enumerate(g.vertices)]
        lines += [f"e {g.index[e.u] + 1} {g.index[e.v] + 1}" for e in ortho]
        return ("\n".join(lines) + "\n").encode()
    raise ValueError(f"unknown format {format!r}")


def import_graph(data: bytes | str, format: str = "json", *, dim: int = 3) -> OrthoGraph:
    text = data.decode() if isinstance(data, bytes) else data
    if format == "json":
        return OrthoGraph.from_dict(json.loads(text))
    if format == "dimacs":
        n = None
        names: dict[int, str] = {}
        pairs = []
        for line in text.splitlines():
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "p":
                n = int(parts[2])
            elif parts[0] == "c" and len(parts) >= 4 and parts[1] == "v":
                names[int(parts[2])] = parts[3]
            elif parts[0] == "e":
                pairs.append((int(parts[1]), int(parts[2])))
        if n is None:
            raise GraphError("missing 'p edge' line")
        labels = [names.get(i, str(i)) for i in range(1, n + 1)]
        return graph_from_edges(dim, labels, [(labels[a - 1], labels[b - 1]) for a, b in pairs])
    raise ValueError(f"unknown format {format!r}")
