from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ksforge.geometry import VectorSet
from ksforge.orthograph import (DuplicateEdge, Edge, EdgeKind, GraphError, NotOrthogonal, OrthoGraph,
                                add_typed_edge, bron_kerbosch, export_graph, graph_from_edges,
                                graph_from_vectors, import_graph, mark_one_excluded)


def frame():
    return VectorSet.from_raw("frame", [("a", (1, 0, 0)), ("b", (0, 1, 0)), ("c", (0, 0, 1)),
                                        ("d", (0, 1, 1))])


def test_bases_from_vectors():
    g = graph_from_vectors(frame())
    assert g.bases == (("a", "b", "c"),)
    assert g.adjacent("a", "d") and not g.adjacent("b", "d")
    assert g.clique_report().clique_number == 3


def test_not_orthogonal_rejected():
    s = frame()
    g = graph_from_vectors(s)
    with pytest.raises(NotOrthogonal):
        add_typed_edge(g, "b", "d", EdgeKind.ORTHO)


def test_typed_edges():
    g = graph_from_vectors(frame())
    h = add_typed_edge(g, "a", "d", "FORBID11")
    with pytest.raises(DuplicateEdge):
        add_typed_edge(h, "d", "a", EdgeKind.FORBID11)
    # implication is directed: both directions may coexist
    k = add_typed_edge(add_typed_edge(g, "a", "d", EdgeKind.IMPLIES_INTERIOR), "d", "a",
                       EdgeKind.IMPLIES_INTERIOR)
    assert len(k.edges_of(EdgeKind.IMPLIES_INTERIOR)) == 2
    with pytest.raises(GraphError):
        add_typed_edge(g, "a", "a", EdgeKind.FORBID11)
    with pytest.raises(GraphError):
        add_typed_edge(g, "a", "zz", EdgeKind.FORBID11)


def test_one_excluded_unknown_vertex():
    g = graph_from_vectors(frame())
    assert mark_one_excluded(g, ["a"]).one_excluded == {"a"}
    with pytest.raises(GraphError):
        g.replace(one_excluded={"nope"}, validate=True)


def test_bad_basis_rejected():
    with pytest.raises(GraphError):
        OrthoGraph(3, ["a", "b", "c"], [Edge("a", "b", EdgeKind.ORTHO)], [("a", "b", "c")])


def test_json_and_dimacs_roundtrip():
    g = add_typed_edge(graph_from_vectors(frame()), "a", "d", EdgeKind.FORBID11)
    g = mark_one_excluded(g, ["c"])
    h = import_graph(export_graph(g, "json"))
    assert h == g and h.digest() == g.digest()
    d = import_graph(export_graph(g, "dimacs"), "dimacs")
    assert d.vertices == g.vertices
    assert {e.key() for e in d.edges} == {e.key() for e in g.edges_of(EdgeKind.ORTHO)}
    with pytest.raises(GraphError):
        import_graph("e 1 2\n", "dimacs")


def test_induced_keeps_inner_bases():
    g = graph_from_vectors(frame())
    h = g.induced(["a", "b", "d"])
    assert h.bases == () and len(h.edges) == 2


def brute_cliques(n, adj):
    out = []
    for r in range(1, n + 1):
        for c in itertools.combinations(range(n), r):
            if all(j in adj[i] for i, j in itertools.combinations(c, 2)):
                if not any(k not in c and all(k in adj[i] for i in c) for k in range(n)):
                    out.append(c)
    return sorted(out)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 9), st.floats(0, 1), st.integers(0, 10**6))
def test_bron_kerbosch_matches_brute_force(n, dens, seed):
    rng = random.Random(seed)
    adj = [set() for _ in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        if rng.random() < dens:
            adj[i].add(j)
            adj[j].add(i)
    assert sorted(bron_kerbosch(adj)) == brute_cliques(n, adj)


def test_default_bases_are_dim_cliques():
    g = graph_from_edges(3, list("abcd"), [("a", "b"), ("b", "c"), ("a", "c"), ("c", "d")])
    assert g.bases == (("a", "b", "c"),)
