"""Independent verification of outcome assignments against the KS rules."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..orthograph import EdgeKind, OrthoGraph
from .alphabet import Alphabet, Assignment


class PartialAssignment(ValueError):
    pass


class ValueOutsideAlphabet(ValueError):
    pass


@dataclass
class CheckResult:
    ok: bool
    violations: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok


def check_assignment(g: OrthoGraph, a: Assignment, alpha: Alphabet) -> CheckResult:
    missing = [v for v in g.vertices if v not in a]
    if missing:
        raise PartialAssignment(f"{len(missing)} vertices unassigned, e.g. {missing[0]!r}")
    for v in g.vertices:
        if Fraction(a[v]) not in alpha:
            raise ValueOutsideAlphabet(f"{v!r} = {a[v]} not in {alpha}")
    val = {v: Fraction(a[v]) for v in g.vertices}
    bad = []
    # recomputed here rather than reusing any solver structure
    for clique in g.clique_report().maximal_cliques:
        s = sum(val[x] for x in clique)
        if s > 1:
            bad.append(f"exclusivity: clique {clique} sums to {s}")
    for b in g.bases:
        s = sum(val[x] for x in b)
        if s != 1:
            bad.append(f"completeness: basis {b} sums to {s}")
    for e in g.edges:
        if e.kind is EdgeKind.FORBID11 and val[e.u] == 1 and val[e.v] == 1:
            bad.append(f"forbid11: {e.u!r} and {e.v!r} both 1")
        elif e.kind is EdgeKind.IMPLIES_INTERIOR and val[e.u] == 1 and not 0 < val[e.v] < 1:
            bad.append(f"implies-interior: {e.u!r} = 1 but {e.v!r} = {val[e.v]}")
    for x in sorted(g.one_excluded):
        if val[x] == 1:
            bad.append(f"one-excluded: {x!r} = 1")
    return CheckResult(not bad, bad)
