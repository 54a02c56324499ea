from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_graph
from ksforge.colorings import (HALF, KERNEL, ZERO_ONE, Alphabet, AlphabetError, Budget, PartialAssignment,
                               PinError, ValueOutsideAlphabet, check_assignment, exhaustive_oracle,
                               fmt_rational, parse_rational, propagation_trace, search_assignment)
from ksforge.colorings.oracle import TooLarge
from ksforge.orthograph import EdgeKind, add_typed_edge, graph_from_edges

KERNELS = ["python"] + (["cython"] if KERNEL == "cython" else [])
Q = Alphabet.O(Fraction(1, 4), 3)


def triangle():
    return graph_from_edges(3, list("abc"), [("a", "b"), ("b", "c"), ("a", "c")])


# -- alphabets ---------------------------------------------------------------

def test_alphabet_O():
    a = Alphabet.O("1/4", 3)
    assert a.labels() == ["0", "1/4", "3/4", "1"]
    assert Alphabet.O(Fraction(1, 2)).values == HALF.values
    assert 1 not in Alphabet.O(Fraction(1, 4), include_one=False)
    for bad in ("1/3", "3/5", "-1/10"):
        with pytest.raises(AlphabetError):
            Alphabet.O(bad, 3)
    # 1/d is excluded per dimension
    Alphabet.O("1/3", 4)
    with pytest.raises(AlphabetError):
        Alphabet.O("1/4", 4)


def test_alphabet_parse():
    assert Alphabet.parse("0,1/2,1") == HALF
    with pytest.raises(AlphabetError):
        Alphabet.parse("0,1/3,2/3,1")
    with pytest.raises(AlphabetError):
        Alphabet.parse("1/2,1")
    with pytest.raises(AlphabetError):
        parse_rational("x")
    assert fmt_rational(Fraction(3, 4)) == "3/4" and fmt_rational(Fraction(1)) == "1"
    assert Q.scaled() == ([0, 1, 3, 4], 4)


# -- checker -----------------------------------------------------------------

def test_check_assignment_rules():
    g = triangle()
    assert check_assignment(g, {"a": 1, "b": 0, "c": 0}, ZERO_ONE).ok
    r = check_assignment(g, {"a": 0, "b": 0, "c": 0}, ZERO_ONE)
    assert not r.ok and "completeness" in r.violations[0]
    with pytest.raises(PartialAssignment):
        check_assignment(g, {"a": 1}, ZERO_ONE)
    with pytest.raises(ValueOutsideAlphabet):
        check_assignment(g, {"a": Fraction(1, 2), "b": Fraction(1, 2), "c": 0}, ZERO_ONE)


def test_check_typed_edges():
    g = graph_from_edges(3, list("abcd"), [("a", "b"), ("b", "c"), ("a", "c")])
    f = add_typed_edge(g, "a", "d", EdgeKind.FORBID11)
    assert not check_assignment(f, {"a": 1, "b": 0, "c": 0, "d": 1}, ZERO_ONE).ok
    i = add_typed_edge(g, "a", "d", EdgeKind.IMPLIES_INTERIOR)
    assert not check_assignment(i, {"a": 1, "b": 0, "c": 0, "d": 0}, HALF).ok
    assert check_assignment(i, {"a": 1, "b": 0, "c": 0, "d": Fraction(1, 2)}, HALF).ok
    # vacuous when the source is not 1
    assert check_assignment(i, {"a": 0, "b": 1, "c": 0, "d": 0}, HALF).ok


def test_clique_exclusivity_outside_bases():
    # K4 in dimension 3: no basis, but the clique sum stays <= 1
    g = graph_from_edges(3, list("abcd"), [(x, y) for x in "abcd" for y in "abcd" if x < y])
    assert g.bases == ()
    assert check_assignment(g, {x: 0 for x in "abcd"}, ZERO_ONE).ok
    assert not check_assignment(g, {"a": 1, "b": 1, "c": 0, "d": 0}, ZERO_ONE).ok


# -- oracle and search -------------------------------------------------------

def test_oracle_counts_triangle():
    sols = exhaustive_oracle(triangle(), Q)
    # permutations of (1,0,0) plus (1/4, 3/4, 0)
    assert len(sols) == 3 + 6
    with pytest.raises(TooLarge):
        exhaustive_oracle(graph_from_edges(3, [str(i) for i in range(20)], []), Q, limit=1000)


@pytest.mark.parametrize("kernel", KERNELS)
def test_search_agrees_with_oracle(kernel):
    rng = random.Random(7)
    for t in range(60):
        g = random_graph(rng, rng.randint(1, 8), rng.random(), typed=t % 2 == 0)
        for alpha in (ZERO_ONE, HALF, Q):
            sols = exhaustive_oracle(g, alpha)
            r = search_assignment(g, alpha, kernel=kernel)
            assert r.sat == bool(sols), (g.to_dict(), alpha)
            if r.sat:
                assert r.certificate in sols


@pytest.mark.parametrize("kernel", KERNELS)
def test_pins(kernel):
    rng = random.Random(11)
    for _ in range(60):
        g = random_graph(rng, rng.randint(2, 7), 0.5, typed=True)
        v = rng.choice(g.vertices)
        val = rng.choice(Q.values)
        sols = [s for s in exhaustive_oracle(g, Q) if s[v] == val]
        r = search_assignment(g, Q, {v: val}, kernel=kernel)
        assert r.sat == bool(sols)
        if r.sat:
            assert r.certificate[v] == val


def test_pin_errors():
    g = triangle()
    with pytest.raises(PinError):
        search_assignment(g, ZERO_ONE, {"zz": 0})
    with pytest.raises(PinError):
        search_assignment(g, ZERO_ONE, {"a": Fraction(1, 2)})


def test_kernels_identical():
    if len(KERNELS) < 2:
        pytest.skip("compiled kernel not built")
    rng = random.Random(3)
    for _ in range(40):
        g = random_graph(rng, rng.randint(5, 30), 0.3, typed=True)
        for alpha in (ZERO_ONE, HALF, Q):
            a = search_assignment(g, alpha, kernel="python")
            b = search_assignment(g, alpha, kernel="cython")
            assert (a.verdict, a.certificate, a.nodes) == (b.verdict, b.certificate, b.nodes)


def test_timeout_reported(peres):
    _, g = peres
    r = search_assignment(g, ZERO_ONE, budget=Budget(nodes=2))
    assert r.verdict == "TIMEOUT" and r.certificate is None


def test_parallel_matches_serial(peres, cabello):
    for _, g in (peres, cabello):
        for alpha in (ZERO_ONE, HALF):
            a = search_assignment(g, alpha)
            b = search_assignment(g, alpha, threads=3)
            assert a.verdict == b.verdict
            if b.sat:
                assert check_assignment(g, b.certificate, alpha).ok


def test_mrv_same_verdicts(peres):
    _, g = peres
    for alpha in (ZERO_ONE, HALF, Q):
        assert search_assignment(g, alpha).verdict == search_assignment(g, alpha, mrv=True).verdict


def test_trace_reports_conflict():
    g = triangle()
    tr = propagation_trace(g, ZERO_ONE, {"a": 0, "b": 0, "c": 0})
    assert tr.refuted
    tr = propagation_trace(g, ZERO_ONE, {"a": 0, "b": 0})
    assert not tr.refuted and tr.events
    # the forced c = 1 comes from the basis
    assert tr.events[0][1] == ("a", "b", "c")


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_sat_certificates_always_check(seed):
    rng = random.Random(seed)
    g = random_graph(rng, rng.randint(3, 14), rng.uniform(0.2, 0.7), typed=True)
    for alpha in (ZERO_ONE, HALF, Q):
        r = search_assignment(g, alpha)
        if r.sat:
            assert check_assignment(g, r.certificate, alpha).ok
