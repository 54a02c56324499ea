from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_graph
from ksforge.colorings import half_integrality_probe, tight_subset_vertices
from ksforge.colorings.fstab import TooLarge
from ksforge.orthograph import graph_from_edges

H = Fraction(1, 2)


def test_triangle_vertices():
    g = graph_from_edges(3, list("abc"), [("a", "b"), ("b", "c"), ("a", "c")])
    rep = half_integrality_probe(g)
    expect = {(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (H, H, H)}
    assert set(rep.vertices) == expect
    assert rep.all_half_integral and "half-integral" in rep.summary()


def test_isolated_vertex_is_bounded():
    g = graph_from_edges(3, ["a", "b", "c"], [("a", "b")])
    rep = half_integrality_probe(g)
    assert set(rep.vertices) == set(tight_subset_vertices(g))
    assert (0, 0, 1) in rep.vertices


def test_caps():
    g = graph_from_edges(3, [str(i) for i in range(25)], [])
    with pytest.raises(TooLarge):
        half_integrality_probe(g)
    with pytest.raises(TooLarge):
        tight_subset_vertices(g)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_probe_matches_subset_oracle(seed):
    rng = random.Random(seed)
    g = random_graph(rng, rng.randint(1, 7), rng.random())
    rep = half_integrality_probe(g)
    assert set(rep.vertices) == set(tight_subset_vertices(g))
    assert rep.all_half_integral
