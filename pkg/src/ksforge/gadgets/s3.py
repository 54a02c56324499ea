"""Zero-triple gadgets: the two-stage cross-product construction and its angles.

All angles are solved by one-dimensional bracketing in dependency order:

* phi2 from <w13|w3> = 0 (closed form, checked by brentq),
* phi1 from <w8|w9> = 0 given phi2 (the same equation makes <w10|w11> vanish),
* phi3 from <w24|w16> = 0 given phi4 (closed form, mod pi); this also makes
  <w19|w25> vanish, so stage two is a one-parameter family,
* phi5 from <w26|w28> = 0 given theta5 (closed form, theta5 = 0 by default),
* phi4 from <w9|w30> = 0 along the resulting curve.

Each outer equation is bracketed on a grid around the published value and
refined with brentq; the chosen bracket is kept on the result.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import brentq

from ..colorings.alphabet import Alphabet
from ..colorings.search import propagation_trace, search_assignment
from ..geometry import DEFAULT_TOL, VectorSet, normalize
from ..orthograph import graph_from_vectors
from .certs import CertificationFailed, GadgetCertificate, inputs_hash
from .s1 import P_GRID

# published target values used for branch selection
TARGETS = {"phi1": 5.7036, "phi2": 3.5065, "phi3": 5.0234, "phi4": 0.5886,
           "phi5": 2.1829, "theta5": 0.0}
BRACKET_HALF_WIDTH = 0.15


class AngleError(ValueError):
    pass


class NoRootInBracket(AngleError):
    pass


class ResidualTooLarge(AngleError):
    pass


@dataclass
class GadgetAngles:
    theta: float = math.pi / 3
    phi1: float = 0.0
    phi2: float = 0.0
    phi3: float = 0.0
    phi4: float = 0.0
    phi5: float = 0.0
    theta5: float = 0.0
    brackets: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)

    def values(self) -> dict:
        return {k: getattr(self, k) for k in ("phi1", "phi2", "phi3", "phi4", "phi5", "theta5")}

    def to_dict(self) -> dict:
        return asdict(self)


def _unit(v):
    v = np.asarray(v, float)
    return v / np.linalg.norm(v)


def _x(a, b):
    return _unit(np.cross(a, b))


def _yz(phi):
    return np.array([0.0, math.cos(phi), math.sin(phi)]), np.array([0.0, -math.sin(phi), math.cos(phi)])


def raw_stage1(theta: float, phi1: float, phi2: float) -> dict:
    c, s = math.cos(theta), math.sin(theta)
    w = {1: np.array([1.0, 0, 0]), 2: np.array([c, s, 0.0]), 3: np.array([c, 0.0, s])}
    w[4], w[5] = _yz(phi1)
    w[6], w[7] = _yz(phi2)
    w[8] = _x(w[2], w[4])
    w[9] = _x(w[2], w[6])
    w[10] = _x(w[3], w[5])
    w[11] = _x(w[3], w[7])
    w[12] = _x(w[4], w[8])
    w[13] = _x(w[6], w[9])
    w[14] = _x(w[5], w[10])
    w[15] = _x(w[7], w[11])
    w[34] = _x(w[3], w[13])
    return w


def raw_stage2(w: dict, phi3: float, phi4: float) -> dict:
    w = dict(w)
    w[16], w[17] = _yz(phi3)
    w[18], w[19] = _yz(phi4)
    w[20] = _x(w[12], w[18])
    w[21] = _x(w[18], w[20])
    w[22] = _x(w[14], w[17])
    w[23] = _x(w[17], w[22])
    w[24] = _x(w[12], w[20])
    w[25] = _x(w[14], w[22])
    w[26] = _x(w[16], w[24])
    w[27] = _x(w[19], w[25])
    return w


def raw_stage3(w: dict, phi5: float, theta5: float, theta: float) -> dict:
    w = dict(w)
    w[28] = np.array([math.cos(theta5) * math.cos(phi5), math.cos(theta5) * math.sin(phi5),
                      math.sin(theta5)])
    w[29] = _x(w[27], w[28])
    w[30] = _x(w[28], w[29])
    w[31] = _x(w[26], w[28])
    w[32] = _x(w[27], w[29])
    w[33] = _x(w[9], w[30])
    c, s = math.cos(theta), math.sin(theta)
    w["2p"] = np.array([-s, c, 0.0])
    w[35] = _x(w[2], w["2p"])
    return w


def stage1_residuals(theta, phi1, phi2):
    w = raw_stage1(theta, phi1, phi2)
    return {"w8.w9": float(w[8] @ w[9]), "w10.w11": float(w[10] @ w[11]),
            "w13.w3": float(w[13] @ w[3])}


def stage1_identity(theta, phi1, phi2) -> float:
    """sin(phi1) sin(phi2) + cos^2(theta) cos(phi1) cos(phi2)."""
    return math.sin(phi1) * math.sin(phi2) + math.cos(theta) ** 2 * math.cos(phi1) * math.cos(phi2)


def _root(f, target, name, brackets, tol):
    lo, hi = target - BRACKET_HALF_WIDTH, target + BRACKET_HALF_WIDTH
    grid = np.linspace(lo, hi, 61)
    vals = [f(x) for x in grid]
    cands = []
    for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if fa == 0:
            cands.append((a, a))
        elif fa * fb < 0:
            cands.append((a, b))
    if not cands:
        raise NoRootInBracket(f"{name}: no sign change in [{lo:.4f}, {hi:.4f}]")
    a, b = min(cands, key=lambda ab: abs(0.5 * (ab[0] + ab[1]) - target))
    r = a if a == b else brentq(f, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    brackets[name] = [float(a), float(b)]
    return float(r)


def _nearest_branch(x: float, period: float, target: float) -> float:
    return x + period * round((target - x) / period)


def solve_s3_angles(theta: float = math.pi / 3, *, theta5: float = 0.0,
                    root_tol: float = 1e-12) -> GadgetAngles:
    ang = GadgetAngles(theta=theta)
    br = ang.brackets

    def f2(p2):
        w = raw_stage1(theta, 0.3, p2)  # w13.w3 does not involve phi1
        return float(w[13] @ w[3])

    ang.phi2 = _root(f2, TARGETS["phi2"], "phi2", br, root_tol)

    def f1(p1):
        return stage1_identity(theta, p1, ang.phi2)

    ang.phi1 = _root(f1, TARGETS["phi1"], "phi1", br, root_tol)
    w1 = raw_stage1(theta, ang.phi1, ang.phi2)

    def phi3_of(p4):
        # w24 depends on phi4 only; w16 = (0, cos, sin) is orthogonal to it on a mod-pi family
        w24 = raw_stage2(w1, 0.0, p4)[24]
        return _nearest_branch(math.atan2(-w24[1], w24[2]), math.pi, TARGETS["phi3"])

    def phi5_of(w26, t5):
        # w26 . w28 = cos(t5) (a cos(phi5) + b sin(phi5)) + c sin(t5) = 0
        a, b, c = w26
        q = -c * math.tan(t5) / math.hypot(a, b)
        if abs(q) > 1:
            raise NoRootInBracket("phi5: no solution for this theta5")
        base = math.atan2(b, a)
        cands = [base + math.acos(q), base - math.acos(q)]
        return min((_nearest_branch(x, 2 * math.pi, TARGETS["phi5"]) for x in cands),
                   key=lambda x: abs(x - TARGETS["phi5"]))

    def chain(p4):
        p3 = phi3_of(p4)
        w2 = raw_stage2(w1, p3, p4)
        p5 = phi5_of(w2[26], theta5)
        return p3, p5, raw_stage3(w2, p5, theta5, theta)

    def f4(p4):
        w = chain(p4)[2]
        return float(w[9] @ w[30])

    # <w19|w25> vanishes along the whole phi3(phi4) curve, so the stage-two
    # system leaves one degree of freedom; theta5 is imposed and phi4 absorbs
    # the last constraint
    ang.theta5 = theta5
    ang.phi4 = _root(f4, TARGETS["phi4"], "phi4", br, root_tol)
    ang.phi3, ang.phi5, _ = chain(ang.phi4)
    res = s3_residuals(ang)
    ang.residuals = res
    worst = max(abs(v) for v in res.values())
    if worst > max(root_tol, 1e-10):
        raise ResidualTooLarge(f"worst residual {worst:.3g}")
    return ang


def raw_s3(ang: GadgetAngles) -> dict:
    w = raw_stage1(ang.theta, ang.phi1, ang.phi2)
    w = raw_stage2(w, ang.phi3, ang.phi4)
    return raw_stage3(w, ang.phi5, ang.theta5, ang.theta)


CONSTRAINTS = [(8, 9), (10, 11), (13, 3), (24, 16), (19, 25), (26, 28), (9, 30)]


def s3_residuals(ang: GadgetAngles) -> dict:
    w = raw_s3(ang)
    return {f"w{a}.w{b}": float(w[a] @ w[b]) for a, b in CONSTRAINTS}


def _label(k) -> str:
    return "w2'" if k == "2p" else f"w{k}"


STAGE1_KEYS = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 34]
STAGE2_KEYS = list(range(16, 34)) + ["2p", 35]
MINIMAL_KEYS = STAGE1_KEYS


def _set(name, w, keys, tol) -> VectorSet:
    vecs = [normalize(w[k], _label(k)) for k in keys]
    return VectorSet(name, 3, tuple(vecs), tol)


def build_s3(ang: GadgetAngles, tol: float = DEFAULT_TOL) -> VectorSet:
    """Both stages together: 36 rays labeled w1..w35 and w2'."""
    return _set("S3", raw_s3(ang), STAGE1_KEYS + STAGE2_KEYS, tol)


def build_s3_minimal(ang: GadgetAngles, tol: float = DEFAULT_TOL) -> VectorSet:
    """The first stage alone (w1..w15, w34), which already refutes (w1, w2, w3)."""
    return _set("S3min", raw_s3(ang), MINIMAL_KEYS, tol)


CASE_I = ("w1", "w2", "w3")
CASE_II = ("w1", "w2'", "w3")
CASE_I_BASIS = ("w3", "w13", "w34")
CASE_II_BASIS = ("w30", "w9", "w33")


@dataclass
class CaseOutcome:
    case: str
    p: str
    verdict: str
    conflict: tuple | None
    reaches_basis: bool
    derivation: list


def certify_s3_cases(ang: GadgetAngles, grid=None, tol: float = DEFAULT_TOL):
    """Pinned-zero refutations over {0, p, 1-p} for both distinguished triples.

    Returns (certificate, outcomes).  Case (i) runs on the first stage alone,
    case (ii) on the full set; each must be UNSAT and its propagation
    derivation must pass through the named basis.
    """
    grid = grid or P_GRID
    g1 = graph_from_vectors(build_s3_minimal(ang, tol))
    g2 = graph_from_vectors(build_s3(ang, tol))
    outs = []
    for p in grid:
        alpha = Alphabet.O(p, 3, include_one=False)
        for case, g, pins, basis in (("i", g1, CASE_I, CASE_I_BASIS), ("ii", g2, CASE_II, CASE_II_BASIS)):
            pz = {x: 0 for x in pins}
            r = search_assignment(g, alpha, pz)
            tr = propagation_trace(g, alpha, pz)
            outs.append(CaseOutcome(case, str(p), r.verdict, tr.conflict, tr.involves(basis),
                                    [list(s) for s in tr.derivation()]))
    ok = all(o.verdict == "UNSAT" and o.reaches_basis for o in outs)
    cert = GadgetCertificate("S3", "ZERO_TRIPLE_CONTRADICTION", "backtracking",
                             inputs_hash(g2.to_dict(), [str(p) for p in grid]),
                             "PROVEN" if ok else "FAILED",
                             {"cases": [asdict(o) for o in outs]})
    if not ok:
        raise CertificationFailed("S3 pinned-zero cases not refuted")
    return cert, outs
