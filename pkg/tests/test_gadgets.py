from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from ksforge.colorings import HALF, Alphabet, lp_extremize, search_assignment, system_from_graph
from ksforge.geometry import normalize, overlap
from ksforge.gadgets import (CASE_I, P_GRID, ZERO_TRIPLES, GadgetCertificate, NoRootInBracket,
                             assemble_gks, build_lip_a, build_lip_b, build_s1, build_s2,
                             build_s3, build_s3_minimal, certify_s2, certify_s3_cases, lip_a_vectors,
                             pad_dimension, s1_core, s3_residuals, solve_s3_angles,
                             symmetry_closure, synthesize_forbid11)
from ksforge.gadgets.s3 import TARGETS
from ksforge.orthograph import graph_from_vectors


def pair(c):
    return normalize((1, 0, 0), "a"), normalize((c, math.sqrt(1 - c * c), 0), "b")


def test_lip_a_shape():
    s = lip_a_vectors()
    assert len(s) == 14
    g = build_lip_a()
    assert g.certificate.verdict == "INFEASIBLE"
    assert g.certificate.details["pin_u_only"] == "FEASIBLE"


def test_certificate_validation():
    with pytest.raises(ValueError):
        GadgetCertificate("x", "NOT_A_PROPERTY", "exhaustive", "h", "PROVEN")


@pytest.mark.parametrize("c", [0.2, 0.5, 0.577])
def test_forbid11_synthesis(c, tmp_path, monkeypatch):
    monkeypatch.setenv("KSFORGE_CACHE", str(tmp_path))
    v1, v2 = pair(c)
    g = synthesize_forbid11(v1, v2, prefix="t")
    assert g.certificate.details["pins_11"] == "INFEASIBLE"
    assert abs(overlap(g.vectors[g.endpoints[0]], g.vectors[g.endpoints[1]]) - c) < 1e-9
    assert g.levels == (1 if c <= 0.5 else 2)
    # second call is served from the cache and still certified
    assert list(tmp_path.iterdir())
    h = synthesize_forbid11(v1, v2, prefix="t")
    assert h.vectors.labels == g.vectors.labels
    assert h.certificate.verdict == "INFEASIBLE"


def test_forbid11_rejects_degenerate_pairs():
    v1, _ = pair(0.5)
    with pytest.raises(ValueError):
        synthesize_forbid11(v1, v1.relabel("c"))
    with pytest.raises(ValueError):
        synthesize_forbid11(v1, normalize((0, 1, 0), "o"))


def test_lip_b_packaged():
    lb = build_lip_b()
    ext = lb.bounds
    assert 0 < ext.min and ext.max < 1
    fresh = lp_extremize(system_from_graph(lb.graph, {lb.source: 1}), lb.target)
    assert (fresh.min, fresh.max) == (ext.min, ext.max)


def test_lip_b_typed():
    lb = build_lip_b(mode="typed")
    assert (lb.bounds.min, lb.bounds.max) == (0, 1)
    assert not lb.bounds.min_attained and not lb.bounds.max_attained


def test_s1_typed_one_excluded():
    g = build_s1()
    assert g.certificate.verdict == "PROVEN"
    assert set(g.certificate.details["per_p"]) == {str(p) for p in P_GRID}
    # without the pin the gadget is colorable, so the exclusion is not vacuous
    for p in P_GRID:
        assert search_assignment(g.graph, Alphabet.O(p, 3), {g.anchor: 0}).sat


def test_s1_rotated_anchor():
    g = build_s1(normalize((1, 2, 3), "r"), prefix="r.")
    assert g.certificate.verdict == "PROVEN"
    assert g.vectors[g.anchor].same_ray(normalize((1, 2, 3)))


def test_pad_dimension():
    s = pad_dimension(s1_core(), 5)
    assert s.dim == 5 and len(s) == len(s1_core()) + 2
    m = s.matrix()
    assert np.allclose(np.linalg.norm(m, axis=1), 1)


def test_s2_zero_triples():
    s = build_s2()
    assert len(s) == 9 and len(ZERO_TRIPLES) == 12
    for p in P_GRID:
        c = certify_s2(p)
        k = len(Alphabet.O(p, 3, include_one=False))
        assert c.verdict == "PROVEN" and c.details["candidates"] == k ** 9
        assert not c.details["escapes"]


def test_s3_angles_and_residuals(angles):
    for k, v in angles.values().items():
        assert abs(v - TARGETS[k]) < 1e-3
    assert max(abs(r) for r in s3_residuals(angles).values()) < 1e-9
    with pytest.raises(NoRootInBracket):
        solve_s3_angles(math.pi / 6)


def test_s3_case_certificates(angles):
    cert, outs = certify_s3_cases(angles)
    assert cert.verdict == "PROVEN"
    assert {o.case for o in outs} == {"i", "ii"}
    assert all(o.verdict == "UNSAT" and o.reaches_basis for o in outs)


def test_minimal_gadget_needs_no_one(angles):
    g = graph_from_vectors(build_s3_minimal(angles))
    pins = {x: 0 for x in CASE_I}
    q = Fraction(1, 4)
    assert search_assignment(g, Alphabet.O(q, 3, include_one=False), pins).verdict == "UNSAT"
    # with the value 1 available the pinned triple is no longer contradictory
    assert search_assignment(g, Alphabet.O(q, 3), pins).sat


def test_symmetry_closure_counts(angles):
    a, sf = symmetry_closure(build_s3(angles))
    assert len(a) <= 2 * len(build_s3(angles)) and len(sf) <= 3 * len(a)


def test_assembly_counts():
    asm = assemble_gks(Fraction(1, 2), search=False)
    assert asm.counts["total"] == 150
    assert asm.counts["edges"] == 313 and asm.counts["bases"] == 104
    assert asm.graph.one_excluded == set(asm.graph.vertices)
    assert asm.certificates[0].property == "ONE_EXCLUDED"


def test_assembly_search_certificates_check():
    asm = assemble_gks(Fraction(1, 4), alphabets=[HALF])
    (r,) = asm.results.values()
    if r.sat:
        # any certificate must respect the typed one-exclusion
        assert all(v != 1 for v in r.certificate.values())
