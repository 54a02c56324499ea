"""ks-forge command line.

Exit status: 0 when verdicts match expectations, 1 on a mismatch (or a
budget running out), 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import math
import re
import sys
from pathlib import Path

from . import __version__
from .colorings import (Alphabet, AlphabetError, Budget, check_assignment, fmt_rational,
                        lp_extremize, lp_feasible, parse_rational, search_assignment,
                        system_from_graph)
from .colorings.search import DEFAULT_NODES, DEFAULT_SECONDS, PinError
from .geometry import DEFAULT_TOL, VectorSet
from .orthograph import GraphError, OrthoGraph, export_graph, graph_from_vectors, import_graph


class UsageError(Exception):
    pass


def parse_theta(text: str) -> float:
    t = text.replace(" ", "").lower()
    m = re.fullmatch(r"(\d*\.?\d*)\*?pi(?:/(\d+(?:\.\d+)?))?", t)
    if m:
        num = float(m.group(1)) if m.group(1) else 1.0
        den = float(m.group(2)) if m.group(2) else 1.0
        return num * math.pi / den
    try:
        return float(t)
    except ValueError as exc:
        raise UsageError(f"cannot parse angle {text!r}") from exc


def parse_pins(items) -> dict:
    pins = {}
    for it in items or ():
        if "=" not in it:
            raise UsageError(f"pin must look like label=value, got {it!r}")
        k, v = it.rsplit("=", 1)
        pins[k] = parse_rational(v)
    return pins


def _corpus_vectors(name: str) -> VectorSet | None:
    from .corpus import PINNED, load_corpus

    key = name.lower().replace("-", "").replace("_", "")
    return load_corpus(key).vectors if key in PINNED else None


def load_graph(path: str, tol: float | None = None) -> OrthoGraph:
    """Graph JSON, VectorSet JSON, gadget bundle JSON, DIMACS, or a corpus name."""
    p = Path(path)
    if not p.exists() and (vs := _corpus_vectors(path)) is not None:
        return graph_from_vectors(vs, tol=tol)
    try:
        text = p.read_text()
    except OSError as exc:
        raise UsageError(str(exc)) from exc
    if p.suffix in (".dimacs", ".col") or text.lstrip().startswith(("p ", "c ")):
        return import_graph(text, "dimacs")
    data = json.loads(text)
    if "graph" in data and isinstance(data["graph"], dict):
        data = data["graph"]
    if data.get("vertices") and isinstance(data["vertices"][0], dict) and "edges" in data:
        return OrthoGraph.from_dict(data)
    if "vectors" in data:
        vs = VectorSet.from_dict(data)
        return graph_from_vectors(vs, name=vs.name, tol=tol)
    raise UsageError(f"{path}: not a graph, vector set, or bundle")


def load_vectors(path: str) -> VectorSet:
    if not Path(path).exists() and (vs := _corpus_vectors(path)) is not None:
        return vs
    data = json.loads(Path(path).read_text())
    if "vectors" in data and isinstance(data["vectors"], dict):
        data = data["vectors"]
    if "vectors" not in data:
        g = OrthoGraph.from_dict(data.get("graph", data))
        return VectorSet(g.name, g.dim, tuple(g.vectors[v] for v in g.vertices), g.tol)
    return VectorSet.from_dict(data)


def _budget(args) -> Budget:
    return Budget(DEFAULT_NODES, float(args.timeout) if args.timeout else DEFAULT_SECONDS)


def _emit(args, payload: dict, text: str):
    if args.format == "json":
        print(json.dumps(payload, indent=1, sort_keys=True, default=str))
    else:
        print(text)


def _write(path: str | None, payload) -> None:
    if path:
        body = payload if isinstance(payload, (str, bytes)) else json.dumps(payload, indent=1, default=str)
        mode = "wb" if isinstance(body, bytes) else "w"
        with open(path, mode) as fh:
            fh.write(body)


def _alphabet(args, d: int) -> Alphabet:
    if args.alphabet:
        return Alphabet.parse(args.alphabet, d)
    return Alphabet.O(parse_rational(args.p), d)


# --------------------------------------------------------------------------


def cmd_build(args) -> int:
    from . import gadgets as G

    theta = parse_theta(args.theta)
    certs = []
    extra = {}
    if args.gadget == "lip-a":
        gg = G.build_lip_a(args.tol)
        vs, graph, certs = gg.vectors, graph_from_vectors(gg.vectors), [gg.certificate]
    elif args.gadget == "lip-b":
        gg = G.build_lip_b(mode=args.mode, tol=args.tol, seed=args.seed)
        vs, graph, certs = gg.vectors, gg.graph, [gg.certificate]
        extra["summary_edge"] = {"u": gg.source, "v": gg.target, "kind": "IMPLIES_INTERIOR"}
    elif args.gadget == "s1":
        gg = G.build_s1(mode=args.mode, tol=args.tol, seed=args.seed)
        vs, graph, certs = gg.vectors, gg.graph, [gg.certificate]
    elif args.gadget == "s2":
        vs = G.build_s2(theta, args.tol)
        graph = graph_from_vectors(vs)
        certs = [G.certify_s2(parse_rational(args.p), theta)]
    elif args.gadget in ("s3", "s3-min"):
        ang = G.solve_s3_angles(theta)
        vs = G.build_s3(ang, args.tol) if args.gadget == "s3" else G.build_s3_minimal(ang, args.tol)
        graph = graph_from_vectors(vs)
        certs = [G.certify_s3_cases(ang)[0]]
        extra["angles"] = ang.to_dict()
    elif args.gadget == "gks":
        asm = G.assemble_gks(parse_rational(args.p), mode=args.mode, theta=theta, tol=args.tol,
                             search=False)
        vs, graph, certs = asm.vectors, asm.graph, asm.certificates
        extra["counts"] = asm.counts
    else:  # argparse restricts choices
        raise UsageError(args.gadget)
    bundle = {"gadget": args.gadget, "vectors": vs.to_dict(), "graph": graph.to_dict(),
              "certificates": [c.to_dict() for c in certs], **extra}
    _write(args.out, bundle)
    _emit(args, {k: bundle[k] for k in ("gadget", "certificates")} | {"size": len(vs)},
          f"{args.gadget}: {len(vs)} rays, {len(graph.bases)} bases; "
          + ", ".join(f"{c.property}={c.verdict}" for c in certs))
    return 0 if all(c.verdict in ("PROVEN", "INFEASIBLE") for c in certs) else 1


def cmd_graph(args) -> int:
    g = load_graph(args.source, args.tol)
    fmt = args.export or "json"
    _write(args.out, export_graph(g, fmt))
    rep = g.clique_report()
    _emit(args, {"name": g.name, "vertices": len(g.vertices), "edges": len(g.edges),
                 "bases": len(g.bases), "clique_number": rep.clique_number, "digest": g.digest()},
          f"{g.name}: {len(g.vertices)} vertices, {len(g.edges)} edges, {len(g.bases)} bases, "
          f"clique number {rep.clique_number}")
    if not args.out and args.format == "text" and args.export:
        sys.stdout.write(export_graph(g, fmt).decode())
    return 0


def cmd_color(args) -> int:
    g = load_graph(args.graph, args.tol)
    alpha = _alphabet(args, g.dim)
    pins = parse_pins(args.pin)
    r = search_assignment(g, alpha, pins, _budget(args), threads=args.threads, mrv=args.mrv)
    cert = r.to_certificate()
    cert["pins"] = {k: fmt_rational(v) for k, v in pins.items()}
    _write(args.out, cert)
    _emit(args, cert, f"{r.verdict}  ({r.nodes} nodes, {r.seconds:.3f}s, {r.kernel} kernel)")
    if r.verdict == "TIMEOUT":
        return 1
    if args.expect and r.verdict != args.expect:
        return 1
    return 0


def cmd_lp(args) -> int:
    g = load_graph(args.graph, args.tol)
    pins = parse_pins(args.pin)
    sysm = system_from_graph(g, pins)
    if args.extremize:
        e = lp_extremize(sysm, args.extremize)
        payload = {"vertex": args.extremize, "min": fmt_rational(e.min), "max": fmt_rational(e.max),
                   "min_attained": e.min_attained, "max_attained": e.max_attained}
        lo = "[" if e.min_attained else "("
        hi = "]" if e.max_attained else ")"
        _emit(args, payload, f"{args.extremize} in {lo}{fmt_rational(e.min)}, {fmt_rational(e.max)}{hi}")
        _write(args.out, payload)
        return 0
    r = lp_feasible(sysm)
    payload = {"verdict": r.verdict, "note": r.note,
               "point": {k: fmt_rational(v) for k, v in (r.point or {}).items()}}
    _write(args.out, payload)
    _emit(args, payload, r.verdict)
    if args.expect and r.verdict != args.expect:
        return 1
    return 0


def cmd_angles(args) -> int:
    from .gadgets import solve_s3_angles

    ang = solve_s3_angles(parse_theta(args.theta))
    d = ang.to_dict()
    _write(args.out, d)
    _emit(args, d, "\n".join(f"{k:7s} {v:.10f}" for k, v in ang.values().items())
          + f"\nmax residual {max(abs(v) for v in ang.residuals.values()):.2e}")
    return 0


def cmd_game(args) -> int:
    from . import games as GM

    vs = load_vectors(args.source)
    if args.complete and vs.dim == 3:
        vs = GM.complete_bases(vs)
    g = GM.build_pt_game(vs, one_excluded="all" if args.one_excluded else ())
    if args.check == "quantum":
        ok = GM.quantum_value_check(g)
        payload = {"check": "quantum", "perfect": ok, "inputs": len(g.X)}
        _emit(args, payload, f"quantum strategy {'perfect' if ok else 'NOT perfect'} on {len(g.X)} inputs")
        _write(args.out, payload)
        return 0 if ok else 1
    if args.check == "classical":
        v = GM.refute_classical(g, args.mode, _budget(args))
    else:
        v = GM.refute_pr_augmented(g, _budget(args))
    payload = v.to_dict() | {"inputs": len(g.X), "game": g.to_dict() if args.dump_game else None}
    _write(args.out, payload)
    _emit(args, payload, f"{v.cls}: {v.label} ({len(g.X)} inputs)")
    if args.expect and v.label != args.expect.replace("-", " "):
        return 1
    return 0


def cmd_verify(args) -> int:
    if args.corpus:
        from .corpus import load_corpus, verify_corpus_entry

        rep = verify_corpus_entry(load_corpus(args.corpus), _budget(args), strict=False)
        _emit(args, rep, f"{rep['name']}: {{0,1}} {rep['zero_one']['verdict']}, "
                         f"{{0,1/2,1}} {rep['half']['verdict']} -> {'ok' if rep['ok'] else 'MISMATCH'}")
        return 0 if rep["ok"] else 1
    if args.report:
        return _verify_report(args)
    if not (args.cert and args.graph):
        raise UsageError("verify needs --corpus, --report, or --cert with --graph")
    g = load_graph(args.graph, args.tol)
    cert = json.loads(Path(args.cert).read_text())
    ok, msg = verify_certificate(g, cert)
    _emit(args, {"ok": ok, "message": msg}, msg)
    return 0 if ok else 1


def verify_certificate(g: OrthoGraph, cert: dict) -> tuple[bool, str]:
    """Standalone check of a SAT certificate; UNSAT ones are re-decided."""
    alpha = Alphabet(tuple(parse_rational(x) for x in cert["alphabet"]))
    if cert["verdict"] == "SAT":
        a = {k: parse_rational(v) for k, v in cert["assignment"].items()}
        chk = check_assignment(g, a, alpha)
        for k, v in cert.get("pins", {}).items():
            if a.get(k) != parse_rational(v):
                return False, f"assignment ignores pin {k}"
        return chk.ok, "SAT certificate valid" if chk.ok else f"invalid: {chk.violations[:3]}"
    pins = {k: parse_rational(v) for k, v in cert.get("pins", {}).items()}
    r = search_assignment(g, alpha, pins)
    return r.verdict == cert["verdict"], f"re-decided: {r.verdict} (claimed {cert['verdict']})"


def _verify_report(args) -> int:
    from .gadgets import assemble_gks

    rep = json.loads(Path(args.report).read_text())
    if rep.get("schema") != 1:
        raise UsageError("unsupported report schema")
    checked = []
    for st in rep["stages"]:
        if st["name"] == "assembly" and "results" in st["details"]:
            asm = assemble_gks(parse_rational(rep["p"]), search=False)
            for key, cert in st["details"]["results"].items():
                if cert["verdict"] == "SAT":
                    ok, msg = verify_certificate(asm.graph, cert)
                    checked.append({"stage": "assembly", "alphabet": key, "ok": ok, "message": msg})
    ok = all(c["ok"] for c in checked)
    _emit(args, {"checked": checked, "ok": ok},
          "\n".join(f"{c['stage']} [{c['alphabet']}]: {c['message']}" for c in checked)
          or "no embedded SAT certificates")
    return 0 if ok else 1


def cmd_pipeline(args) -> int:
    from .pipeline import run_pipeline

    rep = run_pipeline(parse_rational(args.p), _budget(args), threads=args.threads,
                       theta=parse_theta(args.theta))
    _write(args.out, rep.to_json())
    if args.format == "json":
        print(rep.to_json())
    else:
        print(_report_text(rep.to_dict()))
    return 0 if rep.ok else 1


def _report_text(rep: dict) -> str:
    lines = [f"ksforge {rep['version']}  p = {rep['p']}"]
    for st in rep["stages"]:
        secs = f"{st.get('seconds', 0):8.3f}s" if "seconds" in st else ""
        err = st["details"].get("error", "") if st["details"] else ""
        lines.append(f"  {st['name']:11s} {st['verdict']:8s} {secs}  {err}")
    lines.append("ALL PASS" if rep["ok"] else "FAILED")
    return "\n".join(lines)


def cmd_report(args) -> int:
    rep = json.loads(Path(args.source).read_text())
    if args.format == "json":
        print(json.dumps(rep, indent=1, sort_keys=True))
    else:
        print(_report_text(rep))
    return 0 if rep.get("ok") else 1


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", default="1/2", help="alphabet parameter (rational a/b)")
    common.add_argument("--alphabet", help="comma-separated rationals, e.g. 0,1/2,1")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="orthogonality tolerance")
    common.add_argument("--timeout", type=float, help="search time budget in seconds")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", help="write the artifact to this path")

    ap = argparse.ArgumentParser(prog="ks-forge", description="Kochen-Specker style set verification")
    ap.add_argument("--version", action="version", version=f"ks-forge {__version__}")
    sub = ap.add_subparsers(dest="cmd", required=True)

    b = sub.add_parser("build", parents=[common], help="build and certify a gadget")
    b.add_argument("--gadget", required=True, choices=("lip-a", "lip-b", "s1", "s2", "s3", "s3-min", "gks"))
    b.add_argument("--mode", choices=("typed", "concrete"), default=None)
    b.add_argument("--theta", default="pi/3")
    b.set_defaults(fn=cmd_build)

    g = sub.add_parser("graph", parents=[common], help="orthogonality graph of a vector set")
    g.add_argument("--from", dest="source", required=True)
    g.add_argument("--export", choices=("json", "dimacs"))
    g.set_defaults(fn=cmd_graph)

    c = sub.add_parser("color", parents=[common], help="decide assignment existence")
    c.add_argument("--graph", required=True)
    c.add_argument("--pin", action="append", help="label=value, repeatable")
    c.add_argument("--expect", choices=("SAT", "UNSAT"))
    c.add_argument("--mrv", action="store_true", help="smallest-domain-first branching")
    c.set_defaults(fn=cmd_color)

    lp = sub.add_parser("lp", parents=[common], help="exact LP feasibility / bounds")
    lp.add_argument("--graph", required=True)
    lp.add_argument("--pin", action="append")
    lp.add_argument("--extremize")
    lp.add_argument("--expect", choices=("FEASIBLE", "INFEASIBLE"))
    lp.set_defaults(fn=cmd_lp)

    a = sub.add_parser("solve-angles", parents=[common], help="solve the zero-triple gadget angles")
    a.add_argument("--theta", default="pi/3")
    a.set_defaults(fn=cmd_angles)

    gm = sub.add_parser("game", parents=[common], help="pseudo-telepathy game checks")
    gm.add_argument("--from", dest="source", required=True)
    gm.add_argument("--check", choices=("classical", "pr", "quantum"), required=True)
    gm.add_argument("--mode", choices=("coloring", "brute_force"), default="coloring")
    gm.add_argument("--complete", action="store_true", help="complete bases first (d = 3)")
    gm.add_argument("--one-excluded", action="store_true", help="every ray one-excluded (typed)")
    gm.add_argument("--expect", choices=("perfect", "not-perfect"))
    gm.add_argument("--dump-game", action="store_true")
    gm.set_defaults(fn=cmd_game)

    v = sub.add_parser("verify", parents=[common], help="re-verify certificates or corpus entries")
    v.add_argument("--cert")
    v.add_argument("--graph")
    v.add_argument("--corpus")
    v.add_argument("--report")
    v.set_defaults(fn=cmd_verify)

    pl = sub.add_parser("pipeline", parents=[common], help="run every certification stage")
    pl.add_argument("--theta", default="pi/3")
    pl.set_defaults(fn=cmd_pipeline)

    r = sub.add_parser("report", parents=[common], help="show a stored pipeline report")
    r.add_argument("--in", dest="source", required=True)
    r.set_defaults(fn=cmd_report)
    return ap


def main(argv=None) -> int:
    from .corpus import UnknownEntry

    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "mode", "x") is None:
        args.mode = "concrete" if args.gadget == "lip-b" else "typed"
    try:
        return args.fn(args)
    except (UsageError, AlphabetError, PinError, GraphError, UnknownEntry, json.JSONDecodeError,
            FileNotFoundError) as exc:
        print(f"ks-forge {args.cmd}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
