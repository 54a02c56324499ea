"""Full assembly: six quarter-turn copies of S3, the nine-ray S2, and a
one-exclusion gadget on every ray.

    A   = S3 ∪ Rx(S3)
    S_f = A ∪ Rz(A) ∪ Ry(A)
    GKS = S2 ∪ S_f, every ray one-excluded

Rx, Ry, Rz are quarter turns about u1 = e1, u4 = e2 and u7 = e3.  In typed
mode one-exclusion is a unary constraint justified by the S1 certificate
(S1 is built for an arbitrary anchor by rotation, so one certificate covers
every ray).  Concrete mode expands a rotated concrete S1 for every ray,
which is correct but large.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..colorings.alphabet import HALF, Alphabet
from ..colorings.search import Budget, SolveResult, search_assignment
from ..geometry import DEFAULT_TOL, VectorSet, union_sets
from ..orthograph import OrthoGraph, graph_from_vectors, mark_one_excluded
from .certs import GadgetCertificate, GadgetUnavailable
from .s1 import build_s1
from .s2 import build_s2
from .s3 import GadgetAngles, build_s3, solve_s3_angles

log = logging.getLogger(__name__)


@dataclass
class GksAssembly:
    vectors: VectorSet
    graph: OrthoGraph
    mode: str
    counts: dict
    certificates: list[GadgetCertificate] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    results: dict = field(default_factory=dict)


def symmetry_closure(s3: VectorSet) -> tuple[VectorSet, VectorSet]:
    """(A, S_f) from the quarter-turn unions; labels carry the rotation path."""
    a = union_sets([s3, s3.rotated("x", prefix="x.")], name="A")
    sf = union_sets([a, a.rotated("z", prefix="z."), a.rotated("y", prefix="y.")], name="S_f")
    return a, sf


def assemble_gks(p=Fraction(1, 2), *, mode: str = "typed", angles: GadgetAngles | None = None,
                 theta: float = math.pi / 3, tol: float = DEFAULT_TOL, search: bool = True,
                 budget: Budget | None = None, threads: int = 1,
                 alphabets: list[Alphabet] | None = None) -> GksAssembly:
    """Build the assembled set and (optionally) run the full search.

    ``alphabets`` defaults to O(p, 3) alone; each search result is stored in
    ``results`` keyed by the alphabet label string.
    """
    alpha = Alphabet.O(Fraction(p), 3)
    angles = angles or solve_s3_angles(theta)
    s3 = build_s3(angles, tol)
    a, sf = symmetry_closure(s3)
    s2 = build_s2(theta, tol)
    full = union_sets([s2, sf], name="GKS")
    counts = {"S3": len(s3), "A": len(a), "S_f": len(sf), "S2": len(s2), "S_f+S2": len(full)}
    warnings = []
    certs = []
    s1 = build_s1(mode="typed")
    certs.append(s1.certificate)
    if mode == "concrete":
        try:
            parts = [full]
            for v in full:
                parts.append(build_s1(v, mode="concrete", certify=False, prefix=f"{v.label}/").vectors)
            full = union_sets(parts, name="GKS[concrete]")
        except GadgetUnavailable as exc:
            warnings.append(f"concrete S1 unavailable ({exc}); downgraded to typed mode")
            log.warning(warnings[-1])
            mode = "typed"
    g = graph_from_vectors(full, name=full.name)
    if mode == "typed":
        g = mark_one_excluded(g, g.vertices)
    counts["total"] = len(full)
    counts["edges"] = sum(1 for _ in g.edges)
    counts["bases"] = len(g.bases)
    out = GksAssembly(full, g, mode, counts, certs, warnings)
    if search:
        for al in alphabets or [alpha]:
            out.results[",".join(al.labels())] = search_assignment(g, al, None, budget, threads=threads)
    return out


def gks_verdicts(asm: GksAssembly) -> dict[str, str]:
    return {k: r.verdict for k, r in asm.results.items()}


def default_alphabets(p=Fraction(1, 4)) -> list[Alphabet]:
    """{0, 1/2, 1} and O(p, 3)."""
    return [HALF, Alphabet.O(Fraction(p), 3)]


__all__ = ["GksAssembly", "SolveResult", "assemble_gks", "default_alphabets", "gks_verdicts",
           "symmetry_closure"]
