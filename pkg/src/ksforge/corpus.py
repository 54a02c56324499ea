"""Known Kochen-Specker sets shipped as data.

Both entries are built from their usual integer/surd patterns and checked
against a pinned digest of the rounded coordinates on every load.
"""
from __future__ import annotations

import hashlib
import itertools
import math
from dataclasses import dataclass

from .colorings import HALF, ZERO_ONE, Budget, check_assignment, search_assignment
from .geometry import DEFAULT_TOL, VectorSet, normalize
from .orthograph import graph_from_vectors


class UnknownEntry(KeyError):
    pass


class ExpectationMismatch(AssertionError):
    pass


class CorpusIntegrityError(RuntimeError):
    pass


@dataclass
class CorpusEntry:
    name: str
    dim: int
    vectors: VectorSet
    is_ks_set: bool
    half_colorable: bool
    note: str = ""
    expected_bases: int | None = None

    def digest(self) -> str:
        return vector_digest(self.vectors)


def vector_digest(s: VectorSet) -> str:
    rows = sorted(tuple(round(c, 10) + 0.0 for c in v.components) for v in s)
    return hashlib.sha256(repr(rows).encode()).hexdigest()[:16]


R2 = math.sqrt(2)


def _place(zero_at: int, a: float, b: float) -> tuple:
    out = [a, b]
    out.insert(zero_at, 0.0)
    return tuple(out)


def peres33() -> VectorSet:
    items: list[tuple[str, tuple, str]] = []
    for k in range(3):
        e = [0.0] * 3
        e[k] = 1.0
        items.append((f"p{len(items) + 1}", tuple(e), f"e{k + 1}"))
    for z in range(3):
        for s in (1, -1):
            items.append((f"p{len(items) + 1}", _place(z, 1, s), f"(1,{s:+d}) zero@{z + 1}"))
    for z in range(3):
        for first_r2 in (False, True):
            for s in (1, -1):
                a, b = (R2, s) if first_r2 else (1, s * R2)
                items.append((f"p{len(items) + 1}", _place(z, a, b),
                              f"({'sqrt2' if first_r2 else '1'},{s:+d}{'' if first_r2 else 'sqrt2'}) zero@{z + 1}"))
    for k in range(3):
        for s1, s2 in itertools.product((1, -1), repeat=2):
            rest = [1.0, float(s1)]
            v = rest[:]
            v.insert(k, s2 * R2)
            items.append((f"p{len(items) + 1}", tuple(v), f"sqrt2@{k + 1}"))
    vecs = tuple(normalize(c, lab, expr=e) for lab, c, e in items)
    return VectorSet("peres33", 3, vecs, DEFAULT_TOL)


CABELLO18 = [
    (0, 0, 0, 1), (0, 0, 1, 0), (0, 1, 0, 0), (1, 1, 0, 0), (1, -1, 0, 0), (1, 0, 1, 0),
    (1, 0, -1, 0), (1, 0, 0, 1), (1, 0, 0, -1), (0, 0, 1, 1), (0, 1, 0, -1), (0, 1, -1, 0),
    (1, -1, 1, -1), (1, -1, -1, 1), (1, 1, 1, 1), (1, 1, -1, 1), (1, 1, 1, -1), (-1, 1, 1, 1),
]


def cabello18() -> VectorSet:
    vecs = tuple(normalize(c, f"c{i + 1}", expr=str(c)) for i, c in enumerate(CABELLO18))
    return VectorSet("cabello18", 4, vecs, DEFAULT_TOL)


PINNED = {"peres33": "d4c889643d55ce86", "cabello18": "e094c0a34a0a4875"}

_BUILDERS = {
    "peres33": (peres33, "33 rays with components in {0, +-1, +-sqrt2}", None),
    "cabello18": (cabello18, "18 rays in R^4 forming 9 bases, each ray in two", 9),
}


def load_corpus(name: str, *, enable_ks117: bool = False, check_digest: bool = True) -> CorpusEntry:
    key = name.lower().replace("-", "").replace("_", "")
    if key == "ks117":
        raise UnknownEntry("ks117 is not shipped: its coordinates are not available as a text list"
                           if enable_ks117 else "ks117 is disabled (pass enable_ks117=True)")
    if key not in _BUILDERS:
        raise UnknownEntry(name)
    build, note, nb = _BUILDERS[key]
    s = build()
    if check_digest and vector_digest(s) != PINNED[key]:
        raise CorpusIntegrityError(f"{key}: digest {vector_digest(s)} != pinned {PINNED[key]}")
    return CorpusEntry(key, s.dim, s, True, True, note, nb)


def single_basis_entry(d: int = 3) -> CorpusEntry:
    vecs = []
    for k in range(d):
        e = [0.0] * d
        e[k] = 1.0
        vecs.append(normalize(e, f"e{k + 1}"))
    return CorpusEntry(f"basis{d}", d, VectorSet(f"basis{d}", d, tuple(vecs)), False, True,
                       "one orthonormal basis", 1)


def verify_corpus_entry(e: CorpusEntry, budget: Budget | None = None, *, strict: bool = True) -> dict:
    """{0,1} and {0,1/2,1} searches compared against the stored expectations."""
    g = graph_from_vectors(e.vectors, name=e.name)
    r01 = search_assignment(g, ZERO_ONE, None, budget)
    rh = search_assignment(g, HALF, None, budget)
    report = {
        "name": e.name, "dim": e.dim, "vectors": len(e.vectors), "bases": len(g.bases),
        "digest": e.digest(),
        "zero_one": r01.to_certificate(), "half": rh.to_certificate(),
    }
    mism = []
    if e.expected_bases is not None and len(g.bases) != e.expected_bases:
        mism.append(f"bases {len(g.bases)} != {e.expected_bases}")
    if (r01.verdict == "UNSAT") != e.is_ks_set or r01.verdict == "TIMEOUT":
        mism.append(f"{{0,1}}: {r01.verdict}")
    if (rh.verdict == "SAT") != e.half_colorable:
        mism.append(f"{{0,1/2,1}}: {rh.verdict}")
    for r in (r01, rh):
        if r.sat and not check_assignment(g, r.certificate, r.alphabet).ok:
            mism.append("certificate fails re-check")
    report["mismatches"] = mism
    report["ok"] = not mism
    if mism and strict:
        raise ExpectationMismatch(f"{e.name}: " + "; ".join(mism))
    return report
