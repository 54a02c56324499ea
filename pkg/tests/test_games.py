from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from ksforge.colorings import check_assignment, HALF
from ksforge.corpus import cabello18, peres33, single_basis_entry
from ksforge.games import (Behavior, MalformedBehavior, NotCompleted, PredicateLeak,
                           TooLargeForBruteForce, bare_edges, build_pt_game, complete_bases,
                           deterministic_behavior, evaluate_behavior, quantum_behavior,
                           quantum_value_check, refute_classical, refute_pr_augmented,
                           sample_classical)
from ksforge.geometry import VectorSet
from ksforge.orthograph import graph_from_vectors


@pytest.fixture(scope="module")
def peres_game():
    return build_pt_game(complete_bases(peres33()))


def test_completion_covers_every_pair():
    c = complete_bases(peres33())
    assert len(c) > 33
    assert bare_edges(graph_from_vectors(c)) == []


def test_orphan_ray_rejected():
    s = VectorSet.from_raw("t", [("a", (1, 0, 0)), ("b", (0, 1, 0)), ("c", (0, 0, 1)), ("d", (1, 1, 1))])
    with pytest.raises(NotCompleted):
        build_pt_game(s)


def test_single_basis_game():
    g = build_pt_game(single_basis_entry().vectors)
    assert g.win.sum() == 3
    assert quantum_value_check(g)
    assert refute_classical(g).perfect and refute_classical(g, "brute_force").perfect
    assert refute_pr_augmented(g).perfect
    uniform = Behavior(np.full((1, 1, 3, 3), Fraction(1, 9), dtype=object))
    assert evaluate_behavior(g, uniform) == Fraction(1, 3)


def test_peres_game(peres_game):
    g = peres_game
    assert quantum_value_check(g)
    v = refute_classical(g)
    assert not v.perfect and v.label == "not perfect"
    assert v.certificate["verdict"] == "UNSAT"
    pr = refute_pr_augmented(g)
    assert pr.perfect
    assert check_assignment(g.graph, {k: Fraction(x) for k, x in pr.witness["assignment"].items()}, HALF).ok


def test_quantum_behavior_is_valid(peres_game):
    b = quantum_behavior(peres_game)
    b.validate()
    assert abs(evaluate_behavior(peres_game, b) - 1) < 1e-9


def test_leak_detection(peres_game):
    g = peres_game
    bad = type(g)(g.vectors, g.X, g.Y, g.win.copy(), g.graph, g.tol)
    i, j, a, b = map(int, np.argwhere(g.win & (quantum_behavior(g).P > 1e-6))[0])
    bad.win[i, j, a, b] = False
    with pytest.raises(PredicateLeak):
        quantum_value_check(bad)


def test_cabello_game_d4():
    g = build_pt_game(cabello18())
    assert g.d == 4 and len(g.X) == 9
    assert quantum_value_check(g)
    assert not refute_classical(g).perfect
    assert not refute_classical(g, "brute_force").perfect
    assert sample_classical(g, 100, seed=1) < 1


def test_brute_force_cap(peres_game):
    with pytest.raises(TooLargeForBruteForce):
        refute_classical(peres_game, "brute_force")


def test_deterministic_strategy_value():
    g = build_pt_game(cabello18())
    c = [0] * len(g.X)
    b = deterministic_behavior(g, c, c)
    b.validate()
    val = evaluate_behavior(g, b)
    assert isinstance(val, Fraction) and val < 1


def test_malformed_behaviors():
    P = np.full((2, 2, 2, 2), 0.25)
    Behavior(P).validate()
    with pytest.raises(MalformedBehavior):
        Behavior(P * 2).validate()
    Q = P.copy()
    Q[0, 1] = [[0.5, 0], [0.5, 0]]  # Bob's marginal at y=1 differs with x: signaling
    Q[1, 1] = [[0.25, 0.25], [0.25, 0.25]]
    with pytest.raises(MalformedBehavior):
        Behavior(Q).validate()


def test_game_dict():
    d = build_pt_game(single_basis_entry().vectors).to_dict()
    assert d["d"] == 3 and len(d["winning"]) == 3
