"""End-to-end verification run in dependency order.

    lip_a -> lip_b -> s1 -> s2 -> s3_angles -> s3_cases -> s3_minimal -> assembly -> games

A failing stage stops the run; every later stage is reported SKIPPED.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .colorings import HALF, Alphabet, Budget, check_assignment, parse_rational, search_assignment
from .colorings.search import DEFAULT_NODES, DEFAULT_SECONDS
from .gadgets import (CASE_I, assemble_gks, build_lip_a, build_lip_b, build_s1, build_s3_minimal,
                      certify_s2, certify_s3_cases, solve_s3_angles)
from .games import build_pt_game, complete_bases, quantum_value_check, refute_pr_augmented
from .geometry import DEFAULT_TOLERANCES
from .orthograph import graph_from_vectors

SCHEMA = 1
STAGES = ("lip_a", "lip_b", "s1", "s2", "s3_angles", "s3_cases", "s3_minimal", "assembly", "games")


class StageFailed(RuntimeError):
    def __init__(self, stage: str, msg: str):
        super().__init__(f"{stage}: {msg}")
        self.stage = stage


@dataclass
class StageResult:
    name: str
    verdict: str  # PASS | FAIL | SKIPPED
    seconds: float = 0.0
    details: dict = field(default_factory=dict)


@dataclass
class PipelineReport:
    p: str
    stages: list[StageResult]
    budget: dict
    tolerances: dict
    version: str = __version__
    started: str = ""

    @property
    def ok(self) -> bool:
        return all(s.verdict == "PASS" for s in self.stages)

    def stage(self, name: str) -> StageResult:
        return next(s for s in self.stages if s.name == name)

    def to_dict(self, *, timings: bool = True) -> dict:
        out = {"schema": SCHEMA, "tool": "ksforge", "version": self.version, "p": self.p,
               "budget": self.budget, "tolerances": self.tolerances, "ok": self.ok,
               "stages": [{"name": s.name, "verdict": s.verdict, "details": s.details,
                           **({"seconds": round(s.seconds, 4)} if timings else {})}
                          for s in self.stages]}
        if timings:
            out["started"] = self.started
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(**kw), indent=1, sort_keys=True)


def _need(cond: bool, stage: str, msg: str):
    if not cond:
        raise StageFailed(stage, msg)


def run_pipeline(p="1/2", budget: Budget | None = None, *, threads: int = 1, strict: bool = False,
                 theta: float = math.pi / 3) -> PipelineReport:
    """All certification stages for one alphabet parameter.

    ``p`` is validated up front (p = 1/3 raises AlphabetError).  With
    ``strict`` the first failure raises StageFailed instead of being reported.
    """
    p = parse_rational(p) if isinstance(p, str) else Fraction(p)
    alpha = Alphabet.O(p, 3)
    budget = budget or Budget(DEFAULT_NODES, DEFAULT_SECONDS)
    ctx: dict = {}

    def lip_a():
        g = build_lip_a()
        return g.certificate.to_dict()

    def lip_b():
        g = build_lip_b()
        return {**g.certificate.to_dict(), "size": len(g.vectors)}

    def s1():
        g = build_s1()
        return g.certificate.to_dict()

    def s2():
        grid = sorted({Fraction(1, 10), Fraction(1, 4), Fraction(2, 5), Fraction(1, 2)})
        if p not in grid and p not in (0, Fraction(1, 3)):
            grid.append(p)
        certs = {str(q): certify_s2(q, theta).verdict for q in grid if q > 0}
        _need(all(v == "PROVEN" for v in certs.values()), "s2", f"escapes at {certs}")
        return {"per_p": certs}

    def s3_angles():
        ang = solve_s3_angles(theta)
        ctx["angles"] = ang
        return {"angles": {k: round(v, 10) for k, v in ang.values().items()},
                "brackets": ang.brackets,
                "max_residual": max(abs(v) for v in ang.residuals.values())}

    def s3_cases():
        cert, outs = certify_s3_cases(ctx["angles"])
        return {"verdict": cert.verdict,
                "cases": [{"case": o.case, "p": o.p, "verdict": o.verdict,
                           "reaches_basis": o.reaches_basis} for o in outs]}

    def s3_minimal():
        g = graph_from_vectors(build_s3_minimal(ctx["angles"]))
        a = Alphabet.O(p, 3, include_one=False)
        r = search_assignment(g, a, {x: 0 for x in CASE_I}, budget)
        _need(r.verdict == "UNSAT", "s3_minimal", f"pinned minimal gadget is {r.verdict}")
        return {"vectors": len(g.vertices), "verdict": r.verdict}

    def assembly():
        asm = assemble_gks(p, angles=ctx["angles"], budget=budget, threads=threads,
                           alphabets=[HALF, alpha] if alpha != HALF else [HALF])
        ctx["asm"] = asm
        res = {k: r.to_certificate() for k, r in asm.results.items()}
        for k, r in asm.results.items():
            if r.sat:
                assert check_assignment(asm.graph, r.certificate, r.alphabet).ok
        bad = {k: r.verdict for k, r in asm.results.items() if r.verdict != "UNSAT"}
        details = {"counts": asm.counts, "mode": asm.mode, "warnings": asm.warnings, "results": res}
        ctx["assembly_details"] = details
        _need(not bad, "assembly", f"expected UNSAT, got {bad}")
        return details

    def games():
        c = complete_bases(ctx["asm"].vectors)
        g = build_pt_game(c, one_excluded="all")
        q = quantum_value_check(g)
        v = refute_pr_augmented(g, budget)
        _need(q and not v.perfect, "games", f"quantum={q}, pr_augmented={v.label}")
        return {"inputs": len(g.X), "quantum_perfect": q, "pr_augmented": v.to_dict()}

    fns = {"lip_a": lip_a, "lip_b": lip_b, "s1": s1, "s2": s2, "s3_angles": s3_angles,
           "s3_cases": s3_cases, "s3_minimal": s3_minimal, "assembly": assembly, "games": games}
    results: list[StageResult] = []
    failed = False
    for name in STAGES:
        if failed:
            results.append(StageResult(name, "SKIPPED"))
            continue
        t0 = time.perf_counter()
        try:
            det = fns[name]()
            results.append(StageResult(name, "PASS", time.perf_counter() - t0, det))
        except Exception as exc:  # any failure localizes to its stage
            if strict:
                raise exc if isinstance(exc, StageFailed) else StageFailed(name, repr(exc)) from exc
            det = {"error": str(exc)}
            if name == "assembly" and "assembly_details" in ctx:
                det.update(ctx["assembly_details"])
            results.append(StageResult(name, "FAIL", time.perf_counter() - t0, det))
            failed = True
    tb = DEFAULT_TOLERANCES
    return PipelineReport(str(p), results, {"nodes": budget.nodes, "seconds": budget.seconds},
                          {"ortho_tol": tb.ortho_tol, "norm_tol": tb.norm_tol, "root_tol": tb.root_tol},
                          started=time.strftime("%Y-%m-%dT%H:%M:%S"))
