from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from conftest import random_graph
from ksforge.colorings import (InfeasibleSystem, LinearSystem, lp_extremize, lp_feasible,
                               system_from_graph)
from ksforge.orthograph import EdgeKind, add_typed_edge, graph_from_edges


def tri():
    return graph_from_edges(3, list("abc"), [("a", "b"), ("b", "c"), ("a", "c")])


def test_basis_pins():
    g = tri()
    assert lp_feasible(system_from_graph(g, {"a": 1})).feasible
    assert not lp_feasible(system_from_graph(g, {"a": 1, "b": 1})).feasible
    ext = lp_extremize(system_from_graph(g, {"a": Fraction(1, 3)}), "b")
    assert (ext.min, ext.max) == (0, Fraction(2, 3))
    with pytest.raises(InfeasibleSystem):
        lp_extremize(system_from_graph(g, {"a": 1, "b": 1}), "c")


def test_feasible_point_is_exact():
    r = lp_feasible(system_from_graph(tri(), {"a": Fraction(1, 7)}))
    assert all(isinstance(v, Fraction) for v in r.point.values())
    assert sum(r.point.values()) == 1


def test_strict_rows_and_attainment():
    s = LinearSystem(["x", "y"])
    s.add({"x": 1, "y": 1}, "=", 1)
    s.add_strict("x", upper=True)
    ext = lp_extremize(s, "x")
    assert (ext.min, ext.max) == (0, 1)
    assert ext.min_attained and not ext.max_attained
    s.pin("y", 0)
    assert not lp_feasible(s).feasible


def test_typed_edges_become_strict():
    g = add_typed_edge(graph_from_edges(3, list("abcd"), [("a", "b"), ("b", "c"), ("a", "c")]),
                       "a", "d", EdgeKind.IMPLIES_INTERIOR)
    ext = lp_extremize(system_from_graph(g, {"a": 1}), "d")
    assert (ext.min, ext.max) == (0, 1)
    assert not ext.min_attained and not ext.max_attained
    assert not lp_feasible(system_from_graph(g, {"a": 1, "d": 0})).feasible
    f = add_typed_edge(tri(), "a", "b", EdgeKind.FORBID11)
    assert lp_feasible(system_from_graph(f, {"a": 1})).feasible


def test_unknown_variable():
    s = LinearSystem(["x"])
    with pytest.raises(KeyError):
        s.add({"z": 1}, "<=", 1)
    with pytest.raises(ValueError):
        s.add({"x": 1}, "<", 1)


def _scipy_bounds(s: LinearSystem, var: str):
    idx = {v: i for i, v in enumerate(s.variables)}
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for r in s.rows:
        row = np.zeros(len(idx))
        for v, c in r.coeffs:
            row[idx[v]] = float(c)
        if r.sense == "=":
            A_eq.append(row), b_eq.append(float(r.rhs))
        elif r.sense == "<=":
            A_ub.append(row), b_ub.append(float(r.rhs))
        else:
            A_ub.append(-row), b_ub.append(-float(r.rhs))
    c = np.zeros(len(idx))
    c[idx[var]] = 1
    kw = dict(A_ub=A_ub or None, b_ub=b_ub or None, A_eq=A_eq or None, b_eq=b_eq or None,
              bounds=[(0, 1)] * len(idx), method="highs")
    lo, hi = linprog(c, **kw), linprog(-c, **kw)
    if lo.status == 2:
        return None
    return lo.fun, -hi.fun


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_extremize_matches_float_lp(seed):
    rng = random.Random(seed)
    g = random_graph(rng, rng.randint(2, 9), rng.uniform(0.2, 0.8))
    v = rng.choice(g.vertices)
    pins = {v: Fraction(rng.choice([0, 1, 1, 2]), 4)}
    s = system_from_graph(g, pins)
    target = rng.choice(g.vertices)
    ref = _scipy_bounds(s, target)
    if ref is None:
        assert not lp_feasible(s).feasible
        return
    ext = lp_extremize(s, target)
    assert abs(float(ext.min) - ref[0]) < 1e-7 and abs(float(ext.max) - ref[1]) < 1e-7
