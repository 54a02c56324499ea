"""Gadgets that forbid two rays from both taking the value 1 (FORBID11) and the
composite that forces an interior value (IMPLIES_INTERIOR).

FORBID11 providers:

* overlap 1/2: the fourteen published rays, carried onto the requested pair by
  an orthogonal map;
* overlap below 1/2: least-squares embedding of the same fourteen-vertex graph
  with the endpoints held fixed;
* overlap above 1/2: the template with its last edge (13, 14) dropped and
  replaced by a nested FORBID11 gadget on (13, 14).  Free parameters are
  chosen to reduce |<13|14>|; the recursion stops once it reaches 1/2 or less.

Every provider is certified by exact LP: pinning both endpoints to 1 must be
infeasible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import least_squares, minimize

from ..colorings.lp import Extremum, lp_extremize, lp_feasible, system_from_graph
from ..geometry import DEFAULT_TOL, UnitVector, VectorSet, frame_map, normalize, overlap, union_sets
from ..orthograph import EdgeKind, OrthoGraph, add_typed_edge, graph_from_vectors
from . import cache
from .certs import CertificationFailed, GadgetCertificate, GadgetUnavailable, inputs_hash

S2_, S3_ = math.sqrt(2), math.sqrt(3)
LIP_A_RAW = [
    (-S2_, -1, 1), (S2_, 1, 1), (0, 1, 1), (-2 * S2_, 1, -3), (0, -1, 1), (2 * S2_, -1, -3),
    (1, 0, 0), (1, 2 * S2_, 0), (0, S3_, -1), (-2 * S2_, 1, S3_), (0, S3_, 1), (2 * S2_, -1, S3_),
    (S2_, 1, S3_), (-S2_, -1, S3_),
]
LIP_A_EXPR = [
    "(-sqrt2,-1,1)", "(sqrt2,1,1)", "(0,1,1)", "(-2sqrt2,1,-3)", "(0,-1,1)", "(2sqrt2,-1,-3)",
    "(1,0,0)", "(1,2sqrt2,0)", "(0,sqrt3,-1)", "(-2sqrt2,1,sqrt3)", "(0,sqrt3,1)",
    "(2sqrt2,-1,sqrt3)", "(sqrt2,1,sqrt3)", "(-sqrt2,-1,sqrt3)",
]
LIP_B_RAW = {"v15": (-1, S2_, 0), "v16": (S2_, 1, -3)}

# 1-based template edges of the fourteen-vertex graph
TEMPLATE_EDGES = [(1, 3), (1, 4), (2, 5), (2, 6), (3, 5), (3, 7), (4, 6), (4, 8), (5, 7), (6, 8),
                  (7, 9), (7, 11), (8, 10), (8, 12), (9, 10), (9, 13), (10, 13), (11, 12),
                  (11, 14), (12, 14), (13, 14)]

LSQ_MAX_OVERLAP = 0.5
MAX_LEVELS = 40
DISTINCT = 1e-6


class SynthesisFailed(RuntimeError):
    pass


@dataclass
class Forbid11Gadget:
    vectors: VectorSet
    endpoints: tuple[str, str]
    certificate: GadgetCertificate
    overlaps: list[float] = field(default_factory=list)  # endpoint overlap per nesting level

    @property
    def levels(self) -> int:
        return len(self.overlaps)


def lip_a_vectors(tol: float = DEFAULT_TOL) -> VectorSet:
    vecs = tuple(normalize(v, f"v{i + 1}", expr=e) for i, (v, e) in enumerate(zip(LIP_A_RAW, LIP_A_EXPR)))
    return VectorSet("LIP-A", 3, vecs, tol)


def certify_forbid11(s: VectorSet, u: str, v: str, gadget: str) -> GadgetCertificate:
    g = graph_from_vectors(s)
    both = lp_feasible(system_from_graph(g, {u: 1, v: 1}))
    one = lp_feasible(system_from_graph(g, {u: 1}))
    cert = GadgetCertificate(
        gadget, "FORBID11", "LP case analysis",
        inputs_hash(s.to_dict(), u, v),
        "INFEASIBLE" if not both.feasible else "FEASIBLE",
        {"pins_11": both.verdict, "pin_u_only": one.verdict, "size": len(s),
         "overlap": overlap(s[u], s[v])},
    )
    if both.feasible:
        raise CertificationFailed(f"{gadget}: both endpoints = 1 is LP-feasible")
    return cert


def build_lip_a(tol: float = DEFAULT_TOL) -> Forbid11Gadget:
    s = lip_a_vectors(tol)
    cert = certify_forbid11(s, "v1", "v2", "LIP-A")
    return Forbid11Gadget(s, ("v1", "v2"), cert, [overlap(s["v1"], s["v2"])])


# --------------------------------------------------------------------------
# geometry helpers


def _perp_basis(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    helper = np.eye(3)[int(np.argmin(np.abs(a)))]
    e = np.cross(a, helper)
    e /= np.linalg.norm(e)
    return e, np.cross(a, e)


def _cx(a, b):
    c = np.cross(a, b)
    n = np.linalg.norm(c)
    if n < 1e-12:
        raise ValueError("parallel")
    return c / n


def _distinct(rows: np.ndarray) -> bool:
    G = np.abs(rows @ rows.T)
    np.fill_diagonal(G, 0.0)
    return G.max() < 1 - DISTINCT


def relaxed_template(a: np.ndarray, b: np.ndarray, params) -> np.ndarray:
    """Rows 0..13 = template vertices 1..14, exact except for the (13, 14) edge."""
    s, t, u, w = params
    e, f = _perp_basis(a)
    v3 = math.cos(s) * e + math.sin(s) * f
    v4 = math.cos(t) * e + math.sin(t) * f
    v5 = _cx(b, v3)
    v6 = _cx(b, v4)
    v7 = _cx(v3, v5)
    v8 = _cx(v4, v6)
    e7, f7 = _perp_basis(v7)
    v9 = math.cos(u) * e7 + math.sin(u) * f7
    v11 = math.cos(w) * e7 + math.sin(w) * f7
    v10 = _cx(v8, v9)
    v13 = _cx(v9, v10)
    v12 = _cx(v8, v11)
    v14 = _cx(v11, v12)
    return np.array([a, b, v3, v4, v5, v6, v7, v8, v9, v10, v11, v12, v13, v14])


def _relaxed_choice(a, b, seed: int, starts: int = 24):
    """Parameters that make |<13|14>| small with every ray distinct.

    The attainable floor is 2 - 1/c for endpoint overlap c > 1/2; the
    multistart stops at the first non-degenerate point that reaches it.
    """
    rng = np.random.default_rng(seed)
    c = abs(float(a @ b))
    floor = max(0.0, 2 - 1 / c) + 1e-6

    def obj(p):
        try:
            W = relaxed_template(a, b, p)
        except ValueError:
            return 2.0
        return abs(float(W[12] @ W[13]))

    best = None
    for _ in range(starts):
        p0 = rng.uniform(0, math.pi, 4)
        r = minimize(obj, p0, method="Nelder-Mead",
                     options={"xatol": 1e-9, "fatol": 1e-12, "maxiter": 2000})
        try:
            W = relaxed_template(a, b, r.x)
        except ValueError:
            continue
        if not (DISTINCT < r.fun < 1 - DISTINCT and _distinct(W)):
            continue
        if best is None or r.fun < best[0]:
            best = (r.fun, W)
        if r.fun <= floor:
            break
    if best is None:
        raise SynthesisFailed("no non-degenerate relaxed embedding found")
    return best[1]


def _lsq_embed(a, b, seed: int, restarts: int = 50, tol: float = 1e-13):
    """Least-squares embedding of the full template with both endpoints fixed."""
    E = np.array([(i - 1, j - 1) for i, j in TEMPLATE_EDGES])
    nE = len(E)
    pub = np.array([np.asarray(v, float) / np.linalg.norm(v) for v in LIP_A_RAW])
    M = frame_map((pub[0], pub[1]), (a, b))
    init = (M @ pub[2:].T).T
    rng = np.random.default_rng(seed)

    def full(x):
        return np.vstack([a, b, x.reshape(12, 3)])

    def res(x):
        W = full(x)
        return np.concatenate([np.einsum("ij,ij->i", W[E[:, 0]], W[E[:, 1]]), (W[2:] ** 2).sum(1) - 1])

    def jac(x):
        W = full(x)
        J = np.zeros((nE + 12, 36))
        for k, (i, j) in enumerate(E):
            if i >= 2:
                J[k, 3 * (i - 2):3 * (i - 2) + 3] = W[j]
            if j >= 2:
                J[k, 3 * (j - 2):3 * (j - 2) + 3] = W[i]
        for k in range(12):
            J[nE + k, 3 * k:3 * k + 3] = 2 * W[k + 2]
        return J

    for attempt in range(restarts):
        x0 = (init + (0 if attempt == 0 else 0.5 * rng.standard_normal(init.shape))).ravel()
        x = least_squares(res, x0, jac=jac, method="trf").x
        # Gauss-Newton polish with minimum-norm steps (the system is underdetermined)
        for _ in range(30):
            r0 = res(x)
            if np.abs(r0).max() < 1e-16:
                break
            x = x - np.linalg.lstsq(jac(x), r0, rcond=None)[0]
        W = full(x)
        W = W / np.linalg.norm(W, axis=1)[:, None]
        worst = max(abs(float(W[i] @ W[j])) for i, j in E)
        if worst < tol and _distinct(W):
            return W
    raise SynthesisFailed("least-squares embedding did not converge")


def _as_vectors(W: np.ndarray, labels: list[str]) -> list[UnitVector]:
    return [normalize(row, lab) for row, lab in zip(W, labels)]


def synthesize_forbid11(v1: UnitVector, v2: UnitVector, *, prefix: str | None = None,
                        tol: float = DEFAULT_TOL, seed: int = 0, certify: bool = True) -> Forbid11Gadget:
    """FORBID11 gadget on an arbitrary non-orthogonal, non-parallel pair."""
    c = overlap(v1, v2)
    if not 0 < c < 1 or c < tol or c > 1 - 1e-9:
        raise ValueError(f"endpoint overlap {c:.6g} must lie strictly between 0 and 1")
    prefix = prefix if prefix is not None else f"F[{v1.label},{v2.label}]"
    key = "f11-" + inputs_hash(v1.label, v1.components, v2.label, v2.components, prefix, seed, tol)
    hit = cache.load(key)
    if hit is not None:
        s = cache.vectors_of(hit)
        ok = s[v1.label].same_ray(v1) and s[v2.label].same_ray(v2)
        if ok:
            cert = certify_forbid11(s, v1.label, v2.label, s.name) if certify else _unchecked(s)
            return Forbid11Gadget(s, (v1.label, v2.label), cert, list(hit["overlaps"]))
    a, b = v1.array, v2.array
    vecs: list[UnitVector] = [v1, v2]
    overlaps = []
    level = 0
    while True:
        overlaps.append(abs(float(a @ b)))
        labels = [f"{prefix}.{level}.{k}" for k in range(3, 15)]
        if abs(overlaps[-1] - 0.5) < 1e-12:
            pub = np.array([np.asarray(v, float) / np.linalg.norm(v) for v in LIP_A_RAW])
            bb = b if float(a @ b) < 0 else -b  # published pair has signed product -1/2
            M = frame_map((pub[0], pub[1]), (a, bb))
            W = (M @ pub.T).T
            vecs += _as_vectors(W[2:], labels)
            break
        if overlaps[-1] <= LSQ_MAX_OVERLAP:
            W = _lsq_embed(a, b, seed + level)
            vecs += _as_vectors(W[2:], labels)
            break
        if level >= MAX_LEVELS:
            raise SynthesisFailed(f"nesting did not reach overlap {LSQ_MAX_OVERLAP} in {MAX_LEVELS} levels")
        W = _relaxed_choice(a, b, seed + level)
        vecs += _as_vectors(W[2:], labels)
        a, b = W[12], W[13]
        level += 1
    s = union_sets([VectorSet("part", 3, (v,), tol) for v in vecs], name=f"FORBID11({v1.label},{v2.label})")
    if len(s) != len(vecs):
        raise SynthesisFailed("gadget rays collide")
    cert = certify_forbid11(s, v1.label, v2.label, s.name) if certify else _unchecked(s)
    cache.store(key, {"vectors": s.to_dict(), "overlaps": overlaps})
    return Forbid11Gadget(s, (v1.label, v2.label), cert, overlaps)


def _unchecked(s: VectorSet) -> GadgetCertificate:
    return GadgetCertificate(s.name, "FORBID11", "LP case analysis", inputs_hash(s.to_dict()), "UNCHECKED")


def forbid11_provider(v1: UnitVector, v2: UnitVector, **kw) -> Forbid11Gadget:
    """Published set for the published pair, synthesized gadget otherwise."""
    pub = lip_a_vectors()
    if v1.same_ray(pub["v1"]) and v2.same_ray(pub["v2"]):
        g = build_lip_a()
        ren = {"v1": v1.label, "v2": v2.label}
        prefix = kw.get("prefix") or f"F[{v1.label},{v2.label}]"
        s = VectorSet(g.vectors.name, 3, tuple(
            x.relabel(ren.get(x.label, f"{prefix}.{x.label}")) for x in g.vectors), g.vectors.tol)
        return Forbid11Gadget(s, (v1.label, v2.label), g.certificate, g.overlaps)
    return synthesize_forbid11(v1, v2, **kw)


# --------------------------------------------------------------------------
# interior-forcing composite


@dataclass
class LipBGadget:
    vectors: VectorSet
    graph: OrthoGraph
    source: str
    target: str
    certificate: GadgetCertificate
    bounds: Extremum | None = None
    providers: list[Forbid11Gadget] = field(default_factory=list)


def lip_b_skeleton(v1: UnitVector, v2: UnitVector, tol: float = DEFAULT_TOL) -> VectorSet:
    """v1, v2, their common normal and the ray in their plane orthogonal to v2."""
    pub = lip_a_vectors()
    if v1.same_ray(pub["v1"]) and v2.same_ray(pub["v2"]):
        extra = [normalize(LIP_B_RAW["v15"], "v15", expr="(-1,sqrt2,0)"),
                 normalize(LIP_B_RAW["v16"], "v16", expr="(sqrt2,1,-3)")]
        return VectorSet("LIP-B-skeleton", 3, (v1, v2, *extra), tol)
    n = np.cross(v1.array, v2.array)
    w = np.cross(v2.array, n)
    return VectorSet(f"LIPB({v1.label},{v2.label})", 3,
                     (v1, v2, normalize(n, f"N[{v1.label},{v2.label}]"),
                      normalize(w, f"W[{v1.label},{v2.label}]")), tol)


DATA_DIR = Path(__file__).resolve().parent.parent / "data"
PACKAGED_LIP_B = DATA_DIR / "lip_b.json"


def build_lip_b(v1: UnitVector | None = None, v2: UnitVector | None = None, *,
                mode: str = "concrete", tol: float = DEFAULT_TOL, seed: int = 0,
                packaged: bool = True) -> LipBGadget:
    """Composite forcing 0 < f(v2) < 1 whenever f(v1) = 1.

    ``mode="typed"`` keeps the two FORBID11 relations as typed edges;
    ``mode="concrete"`` expands them into verified vector gadgets.  For the
    published pair the concrete vectors ship with the package (regenerate with
    scripts/regen_data.py); they are re-certified on every load.
    """
    pub = lip_a_vectors(tol)
    default_pair = v1 is None and v2 is None
    v1 = v1 or pub["v1"]
    v2 = v2 or pub["v2"]
    sk = lip_b_skeleton(v1, v2, tol)
    w_lab = sk.labels[3]
    if mode == "concrete" and default_pair and packaged and PACKAGED_LIP_B.exists():
        s = VectorSet.from_json(PACKAGED_LIP_B.read_text())
        g = graph_from_vectors(s, name=s.name)
        providers = []
    elif mode == "typed":
        g = graph_from_vectors(sk, name=sk.name)
        g = add_typed_edge(g, v1.label, v2.label, EdgeKind.FORBID11)
        g = add_typed_edge(g, v1.label, w_lab, EdgeKind.FORBID11)
        s = sk
        providers = []
    elif mode == "concrete":
        providers = []
        for other in (v2, sk[w_lab]):
            try:
                providers.append(forbid11_provider(v1, other, tol=tol, seed=seed))
            except (SynthesisFailed, CertificationFailed) as exc:
                raise GadgetUnavailable(f"FORBID11 for ({v1.label},{other.label}): {exc}") from exc
        s = union_sets([sk] + [p.vectors for p in providers], name=f"LIP-B({v1.label}->{v2.label})")
        g = graph_from_vectors(s, name=s.name)
    else:
        raise ValueError(mode)
    sysm = system_from_graph(g, {v1.label: 1})
    ext = lp_extremize(sysm, v2.label)
    strict_ok = ext.min > 0 or not ext.min_attained
    strict_hi = ext.max < 1 or not ext.max_attained
    verdict = "PROVEN" if strict_ok and strict_hi else "FAILED"
    cert = GadgetCertificate(s.name, "IMPLIES_INTERIOR", "LP case analysis",
                             inputs_hash(s.to_dict(), mode),
                             verdict, {"mode": mode, "min": str(ext.min), "max": str(ext.max),
                                       "min_attained": ext.min_attained,
                                       "max_attained": ext.max_attained, "size": len(s)})
    if verdict != "PROVEN":
        raise CertificationFailed(f"LIP-B ({mode}): bounds {ext}")
    return LipBGadget(s, g, v1.label, v2.label, cert, ext, providers)
