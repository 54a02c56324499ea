from __future__ import annotations

import random

import pytest

from ksforge.corpus import load_corpus
from ksforge.gadgets import solve_s3_angles
from ksforge.orthograph import EdgeKind, add_typed_edge, graph_from_edges, graph_from_vectors

# filled by test_acceptance; printed at the end of the run
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def random_graph(rng: random.Random, n: int, density: float, *, typed: bool = False):
    labels = [f"x{i}" for i in range(n)]
    pairs = [(labels[i], labels[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    g = graph_from_edges(3, labels, pairs, name=f"rand{n}")
    if typed and n >= 2:
        for _ in range(rng.randint(0, 2)):
            u, v = rng.sample(labels, 2)
            kind = rng.choice([EdgeKind.FORBID11, EdgeKind.IMPLIES_INTERIOR])
            try:
                g = add_typed_edge(g, u, v, kind)
            except ValueError:
                pass
        g = g.replace(one_excluded={x for x in labels if rng.random() < 0.15})
    return g


@pytest.fixture(scope="session")
def angles():
    return solve_s3_angles()


@pytest.fixture(scope="session")
def peres():
    e = load_corpus("peres33")
    return e, graph_from_vectors(e.vectors)


@pytest.fixture(scope="session")
def cabello():
    e = load_corpus("cabello18")
    return e, graph_from_vectors(e.vectors)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, msg = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {msg}")
