"""One-exclusion gadget: no O-valued assignment gives the anchor ray the value 1.

Core rays for anchor e1:

    v1 = (1,0,0)        v2 = (0,0,1)        v3 = (1,1,0)/sqrt2
    v4 = (-1,1,0)/sqrt2 v5 = (1,1,2)/sqrt6  v6 = (1,1,-1)/sqrt3

With f(v1) = 1 the interior-forcing relations v1 -> v3, v5, v6 leave
f(v4) = 1 - f(v3) interior, so the basis (v4, v5, v6) needs three interior
values summing to 1.  Over {p, 1-p} that means p = 1/3 or p = 2/3, both
outside the admissible range.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..colorings.alphabet import Alphabet
from ..colorings.search import Budget, search_assignment
from ..geometry import DEFAULT_TOL, UnitVector, VectorSet, normalize, rotation_taking, union_sets
from ..orthograph import EdgeKind, OrthoGraph, add_typed_edge, graph_from_vectors
from .certs import CertificationFailed, GadgetCertificate, GadgetUnavailable, inputs_hash
from .lip import LipBGadget, build_lip_b

P_GRID = (Fraction(1, 10), Fraction(1, 4), Fraction(2, 5), Fraction(1, 2))
S1_CORE = {
    "v1": ((1, 0, 0), "(1,0,0)"),
    "v2": ((0, 0, 1), "(0,0,1)"),
    "v3": ((1, 1, 0), "(1,1,0)/sqrt2"),
    "v4": ((-1, 1, 0), "(-1,1,0)/sqrt2"),
    "v5": ((1, 1, 2), "(1,1,2)/sqrt6"),
    "v6": ((1, 1, -1), "(1,1,-1)/sqrt3"),
}
INTERIOR_TARGETS = ("v3", "v5", "v6")


@dataclass
class S1Gadget:
    vectors: VectorSet
    graph: OrthoGraph
    anchor: str
    mode: str
    certificate: GadgetCertificate | None = None
    lip_b: list[LipBGadget] = field(default_factory=list)


def s1_core(v1: UnitVector | None = None, tol: float = DEFAULT_TOL, prefix: str = "") -> VectorSet:
    """The six core rays, rotated so that v1 lands on the requested anchor."""
    vecs = [normalize(c, f"{prefix}{k}", expr=e) for k, (c, e) in S1_CORE.items()]
    if v1 is not None:
        e1 = np.array([1.0, 0.0, 0.0])
        R = rotation_taking(e1, v1.array)
        vecs = [normalize(R @ v.array, v.label) for v in vecs]
        vecs[0] = v1.relabel(f"{prefix}v1") if v1.label != f"{prefix}v1" else v1
    return VectorSet(f"{prefix}S1", 3, tuple(vecs), tol)


def build_s1(v1: UnitVector | None = None, *, mode: str = "typed", tol: float = DEFAULT_TOL,
             certify: bool = True, grid=P_GRID, prefix: str = "", seed: int = 0) -> S1Gadget:
    """Core plus three interior-forcing relations from v1.

    ``mode="typed"`` stores them as IMPLIES_INTERIOR edges; ``mode="concrete"``
    replaces each by a synthesized LIP-B composite.
    """
    core = s1_core(v1, tol, prefix)
    anchor = core.labels[0]
    lips: list[LipBGadget] = []
    if mode == "typed":
        s = core
        g = graph_from_vectors(core, name=core.name)
        for t in INTERIOR_TARGETS:
            g = add_typed_edge(g, anchor, f"{prefix}{t}", EdgeKind.IMPLIES_INTERIOR)
    elif mode == "concrete":
        for t in INTERIOR_TARGETS:
            try:
                lips.append(build_lip_b(core[anchor], core[f"{prefix}{t}"], mode="concrete",
                                        tol=tol, seed=seed))
            except CertificationFailed as exc:
                raise GadgetUnavailable(f"LIP-B {anchor}->{t}: {exc}") from exc
        s = union_sets([core] + [lb.vectors for lb in lips], name=f"{core.name}[concrete]")
        g = graph_from_vectors(s, name=s.name)
    else:
        raise ValueError(mode)
    out = S1Gadget(s, g, anchor, mode, None, lips)
    if certify:
        out.certificate = certify_one_excluded(g, anchor, grid)
    return out


def certify_one_excluded(g: OrthoGraph, anchor: str, grid=P_GRID,
                         budget: Budget | None = None) -> GadgetCertificate:
    verdicts = {}
    for p in grid:
        r = search_assignment(g, Alphabet.O(p, 3), {anchor: 1}, budget)
        verdicts[str(p)] = r.verdict
    ok = all(v == "UNSAT" for v in verdicts.values())
    cert = GadgetCertificate(g.name, "ONE_EXCLUDED", "backtracking",
                             inputs_hash(g.to_dict(), anchor, [str(p) for p in grid]),
                             "PROVEN" if ok else "FAILED", {"per_p": verdicts, "anchor": anchor})
    if not ok:
        raise CertificationFailed(f"one-exclusion fails: {verdicts}")
    return cert


def pad_dimension(s: VectorSet, d: int) -> VectorSet:
    """Embed a 3-dimensional set in R^d and add e4..ed.

    The added basis vectors are orthogonal to every embedded ray, so each old
    basis grows into a d-basis; nothing here is certified beyond d = 3.
    """
    if d < s.dim:
        raise ValueError("cannot pad to a smaller dimension")
    if d == s.dim:
        return s
    vecs = [UnitVector(v.label, tuple(v.components) + (0.0,) * (d - s.dim), v.expr) for v in s.vectors]
    for k in range(s.dim, d):
        comps = [0.0] * d
        comps[k] = 1.0
        vecs.append(UnitVector(f"e{k + 1}", tuple(comps), f"e{k + 1}"))
    return VectorSet(f"{s.name}^{d}", d, tuple(vecs), s.tol)
