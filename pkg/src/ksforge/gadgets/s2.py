"""Nine-ray set whose colorings without the value 1 always zero out a triple."""
from __future__ import annotations

import math
from fractions import Fraction

from ..colorings.alphabet import Alphabet
from ..colorings.oracle import iter_valid
from ..geometry import DEFAULT_TOL, VectorSet, normalize
from ..orthograph import graph_from_vectors
from .certs import GadgetCertificate, inputs_hash

# the twelve zero triples (indices into u1..u9)
ZERO_TRIPLES = [(1, 5, 8), (1, 5, 9), (1, 6, 8), (1, 6, 9), (4, 2, 9), (4, 2, 8),
                (4, 3, 9), (4, 3, 8), (7, 2, 6), (7, 2, 5), (7, 3, 6), (7, 3, 5)]


def s2_raw(theta: float = math.pi / 3) -> dict:
    c, s = math.cos(theta), math.sin(theta)
    return {
        "u1": (1.0, 0.0, 0.0), "u2": (0.0, c, s), "u3": (0.0, -s, c),
        "u4": (0.0, 1.0, 0.0), "u5": (c, 0.0, s), "u6": (-s, 0.0, c),
        "u7": (0.0, 0.0, 1.0), "u8": (c, s, 0.0), "u9": (-s, c, 0.0),
    }


def build_s2(theta: float = math.pi / 3, tol: float = DEFAULT_TOL) -> VectorSet:
    if not 0 < theta < math.pi / 2:
        raise ValueError("theta must lie in (0, pi/2)")
    vecs = tuple(normalize(v, k) for k, v in s2_raw(theta).items())
    return VectorSet("S2", 3, vecs, tol)


def zero_triple_labels() -> list[tuple[str, str, str]]:
    return [tuple(f"u{i}" for i in t) for t in ZERO_TRIPLES]


def certify_s2(p, theta: float = math.pi / 3) -> GadgetCertificate:
    """Exhaustive check over {0, p, 1-p}: every valid assignment zeroes a listed triple."""
    alpha = Alphabet.O(Fraction(p), 3, include_one=False)
    g = graph_from_vectors(build_s2(theta))
    triples = zero_triple_labels()
    valid = 0
    escapes = []
    for a in iter_valid(g, alpha):
        valid += 1
        if not any(all(a[x] == 0 for x in t) for t in triples):
            escapes.append(a)
    verdict = "PROVEN" if not escapes else "FAILED"
    return GadgetCertificate("S2", "ZERO_TRIPLE_FORCED", "exhaustive",
                             inputs_hash(g.to_dict(), str(p)), verdict,
                             {"p": str(Fraction(p)), "candidates": len(alpha) ** len(g.vertices),
                              "valid": valid, "escapes": [{k: str(v) for k, v in e.items()}
                                                          for e in escapes[:5]]})
