"""Exact rational linear programming over KS-rule systems.

Every variable is a vertex value in [0, 1].  Rows are exclusivity
inequalities, completeness equalities and pins.  Typed edges that touch a
vertex pinned to 1 give strict inequalities, which are decided without any
epsilon: after the closed system is solved, a second program maximizes a
common slack ``t`` on all strict rows and the strict system is feasible
exactly when the optimum is positive.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from ..orthograph import EdgeKind, OrthoGraph

F0 = Fraction(0)
F1 = Fraction(1)


class InfeasibleSystem(ValueError):
    pass


@dataclass(frozen=True)
class Row:
    coeffs: tuple[tuple[str, Fraction], ...]
    sense: str  # "<=", "=", ">="
    rhs: Fraction
    tag: str = ""


@dataclass(frozen=True)
class Strict:
    """var < 1 (upper) or var > 0 (lower)."""
    var: str
    upper: bool
    tag: str = ""


@dataclass
class LinearSystem:
    variables: list[str]
    rows: list[Row] = field(default_factory=list)
    strict: list[Strict] = field(default_factory=list)

    def add(self, coeffs: dict, sense: str, rhs, tag: str = "") -> None:
        if sense not in ("<=", "=", ">="):
            raise ValueError(sense)
        items = tuple((v, Fraction(c)) for v, c in coeffs.items() if c != 0)
        for v, _ in items:
            if v not in self._known:
                raise KeyError(v)
        self.rows.append(Row(items, sense, Fraction(rhs), tag))

    def pin(self, var: str, value) -> None:
        self.add({var: 1}, "=", value, f"pin {var}")

    def add_strict(self, var: str, upper: bool, tag: str = "") -> None:
        self.strict.append(Strict(var, upper, tag))

    @property
    def _known(self):
        k = getattr(self, "_kset", None)
        if k is None or len(k) != len(self.variables):
            k = set(self.variables)
            self._kset = k
        return k

    def copy(self) -> "LinearSystem":
        return LinearSystem(list(self.variables), list(self.rows), list(self.strict))

    def satisfied_by(self, point: dict) -> bool:
        for v in self.variables:
            if not 0 <= point[v] <= 1:
                return False
        for r in self.rows:
            s = sum(c * point[v] for v, c in r.coeffs)
            if (r.sense == "<=" and s > r.rhs) or (r.sense == ">=" and s < r.rhs) or \
                    (r.sense == "=" and s != r.rhs):
                return False
        for st in self.strict:
            x = point[st.var]
            if (st.upper and not x < 1) or (not st.upper and not x > 0):
                return False
        return True


@dataclass
class FeasibilityResult:
    feasible: bool
    point: dict | None = None
    note: str = ""

    @property
    def verdict(self) -> str:
        return "FEASIBLE" if self.feasible else "INFEASIBLE"


@dataclass
class Extremum:
    min: Fraction
    max: Fraction
    min_attained: bool = True
    max_attained: bool = True


def system_from_graph(g: OrthoGraph, pins: dict | None = None) -> LinearSystem:
    """Closed KS system plus the strict rows that typed edges induce under the pins."""
    pins = {k: Fraction(v) for k, v in (pins or {}).items()}
    sys = LinearSystem(list(g.vertices))
    bases = set()
    covered = set()
    for b in g.bases:
        sys.add({x: 1 for x in b}, "=", 1, "basis " + ",".join(b))
        bases.add(frozenset(b))
        covered.update(b)
    for c in g.clique_report().maximal_cliques:
        if len(c) >= 2 and frozenset(c) not in bases:
            sys.add({x: 1 for x in c}, "<=", 1, "clique " + ",".join(c))
            covered.update(c)
    for v in g.vertices:
        if v not in covered:
            sys.add({v: 1}, "<=", 1, f"bound {v}")
    for v, val in pins.items():
        sys.pin(v, val)
    for e in g.edges:
        if e.kind is EdgeKind.FORBID11:
            if pins.get(e.u) == 1:
                sys.add_strict(e.v, True, f"forbid11 {e.u},{e.v}")
            if pins.get(e.v) == 1:
                sys.add_strict(e.u, True, f"forbid11 {e.u},{e.v}")
        elif e.kind is EdgeKind.IMPLIES_INTERIOR:
            if pins.get(e.u) == 1:
                sys.add_strict(e.v, True, f"implies {e.u}->{e.v}")
                sys.add_strict(e.v, False, f"implies {e.u}->{e.v}")
            if e.v in pins and pins[e.v] in (0, 1):
                sys.add_strict(e.u, True, f"implies {e.u}->{e.v} (contrapositive)")
    for v in sorted(g.one_excluded, key=g.index.__getitem__):
        sys.add_strict(v, True, f"one-excluded {v}")
    return sys


# --------------------------------------------------------------------------
# presolve


def _presolve(sys: LinearSystem):
    """Fix variables forced by nonnegative rows. Returns (fixed, rows) or None if infeasible."""
    fixed: dict[str, Fraction] = {}
    rows = [(dict(r.coeffs), r.sense, r.rhs) for r in sys.rows]
    changed = True
    while changed:
        changed = False
        for coeffs, sense, rhs in rows:
            rest = rhs
            free = []
            for v, c in coeffs.items():
                if v in fixed:
                    rest -= c * fixed[v]
                else:
                    free.append((v, c))
            if not free:
                if (sense == "<=" and rest < 0) or (sense == ">=" and rest > 0) or \
                        (sense == "=" and rest != 0):
                    return None
                continue
            if sense in ("<=", "=") and all(c > 0 for _, c in free):
                if rest < 0:
                    return None
                if rest == 0:
                    for v, _ in free:
                        fixed[v] = F0
                    changed = True
                    continue
            if sense == "=" and len(free) == 1:
                v, c = free[0]
                x = rest / c
                if not 0 <= x <= 1:
                    return None
                fixed[v] = x
                changed = True
    left = []
    for coeffs, sense, rhs in rows:
        rest = rhs
        free = {}
        for v, c in coeffs.items():
            if v in fixed:
                rest -= c * fixed[v]
            else:
                free[v] = c
        if free:
            left.append((free, sense, rest))
    return fixed, left


# --------------------------------------------------------------------------
# dense two-phase simplex with Bland's rule


class _Tableau:
    def __init__(self, nvars: int, rows: list[tuple[dict[int, Fraction], str, Fraction]]):
        self.n = nvars
        cols = nvars
        self.slack_cols = []
        prepared = []
        for coeffs, sense, rhs in rows:
            if rhs < 0:
                coeffs = {k: -c for k, c in coeffs.items()}
                rhs = -rhs
                sense = {"<=": ">=", ">=": "<=", "=": "="}[sense]
            prepared.append((coeffs, sense, rhs))
        # slack / surplus columns
        extra = []
        for coeffs, sense, rhs in prepared:
            if sense == "<=":
                extra.append(("slack", cols))
                cols += 1
            elif sense == ">=":
                extra.append(("surplus", cols))
                cols += 1
            else:
                extra.append((None, None))
        self.first_art = cols
        arts = []
        for (kind, _), _row in zip(extra, prepared):
            if kind == "slack":
                arts.append(None)
            else:
                arts.append(cols)
                cols += 1
        self.ncols = cols
        self.T = []
        self.basis = []
        for (coeffs, sense, rhs), (kind, sc), art in zip(prepared, extra, arts):
            row = [F0] * (cols + 1)
            for k, c in coeffs.items():
                row[k] = c
            if kind == "slack":
                row[sc] = F1
                self.basis.append(sc)
            else:
                if kind == "surplus":
                    row[sc] = -F1
                row[art] = F1
                self.basis.append(art)
            row[-1] = rhs
            self.T.append(row)

    def pivot(self, r: int, c: int) -> None:
        T = self.T
        prow = T[r]
        pv = prow[c]
        if pv != 1:
            inv = 1 / pv
            prow = [x * inv if x else x for x in prow]
            T[r] = prow
        nz = [j for j, x in enumerate(prow) if x]
        for i, row in enumerate(T):
            if i != r:
                f = row[c]
                if f:
                    for j in nz:
                        row[j] -= f * prow[j]
        self.basis[r] = c

    def optimize(self, cost: list[Fraction], allowed: int) -> str:
        """Minimize cost over columns < allowed. Returns 'optimal' or 'unbounded'."""
        T = self.T
        m = len(T)
        while True:
            # reduced costs r_j = c_j - c_B B^-1 A_j
            cb = [cost[b] if b < len(cost) else F0 for b in self.basis]
            basic = set(self.basis)
            enter = -1
            for j in range(allowed):
                if j in basic:
                    continue
                rj = cost[j] if j < len(cost) else F0
                for i in range(m):
                    a = T[i][j]
                    if a and cb[i]:
                        rj -= cb[i] * a
                if rj < 0:
                    enter = j
                    break
            if enter < 0:
                return "optimal"
            best = None
            leave = -1
            for i in range(m):
                a = T[i][enter]
                if a > 0:
                    ratio = T[i][-1] / a
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leave]):
                        best, leave = ratio, i
            if leave < 0:
                return "unbounded"
            self.pivot(leave, enter)

    def value(self, j: int) -> Fraction:
        for i, b in enumerate(self.basis):
            if b == j:
                return self.T[i][-1]
        return F0


def _solve_lp(names: list[str], rows, objective: dict | None, maximize: bool = False):
    """Exact LP with implicit 0 <= x <= 1 handled by explicit rows where needed.

    Returns (status, point, value). status in {'optimal', 'infeasible'}.
    """
    index = {v: i for i, v in enumerate(names)}
    irows = [({index[v]: c for v, c in coeffs.items()}, sense, rhs) for coeffs, sense, rhs in rows]
    # upper bounds for variables not dominated by a nonnegative <=/= row with rhs <= 1
    bounded = set()
    for coeffs, sense, rhs in irows:
        if sense in ("<=", "=") and rhs <= 1 and all(c >= 1 for c in coeffs.values()):
            bounded.update(coeffs)
    for v in range(len(names)):
        if v not in bounded:
            irows.append(({v: F1}, "<=", F1))
    tab = _Tableau(len(names), irows)
    # phase 1
    cost1 = [F0] * tab.ncols
    for j in range(tab.first_art, tab.ncols):
        cost1[j] = F1
    tab.optimize(cost1, tab.ncols)
    infeas = sum(tab.value(j) for j in range(tab.first_art, tab.ncols))
    if infeas > 0:
        return "infeasible", None, None
    # drive zero-level artificials out of the basis
    drop = []
    for i, b in enumerate(tab.basis):
        if b >= tab.first_art:
            row = tab.T[i]
            j = next((j for j in range(tab.first_art) if row[j]), None)
            if j is None:
                drop.append(i)
            else:
                tab.pivot(i, j)
    for i in reversed(drop):
        del tab.T[i]
        del tab.basis[i]
    cost2 = [F0] * tab.ncols
    if objective:
        sgn = -1 if maximize else 1
        for v, c in objective.items():
            cost2[index[v]] = sgn * Fraction(c)
    status = tab.optimize(cost2, tab.first_art)
    if status != "optimal":
        raise ArithmeticError("bounded system reported unbounded")
    point = {v: tab.value(i) for v, i in index.items()}
    val = sum(Fraction(c) * point[v] for v, c in (objective or {}).items())
    return "optimal", point, val


def _closed(sys: LinearSystem, objective: dict | None = None, maximize: bool = False,
            extra_rows: Iterable = ()):
    """Optimize over the closed system; returns (point, value) or None."""
    base = sys.copy()
    for r in extra_rows:
        base.rows.append(r)
    pre = _presolve(base)
    if pre is None:
        return None
    fixed, rows = pre
    free = [v for v in sys.variables if v not in fixed]
    obj = None
    const = F0
    if objective:
        obj = {}
        for v, c in objective.items():
            if v in fixed:
                const += Fraction(c) * fixed[v]
            else:
                obj[v] = Fraction(c)
    if free:
        status, point, val = _solve_lp(free, rows, obj, maximize)
        if status == "infeasible":
            return None
    else:
        assert not rows
        point, val = {}, F0
    full = dict(fixed)
    full.update(point)
    return full, (val or F0) + const


def _strict_slack(sys: LinearSystem, extra_rows: Iterable = ()):
    """max t s.t. closed rows, x_s + t <= 1 on upper strict vars, x_s - t >= 0 on lower."""
    aux = "__t__"
    while aux in sys.variables:
        aux += "_"
    s2 = LinearSystem(sys.variables + [aux], list(sys.rows) + list(extra_rows))
    for st in sys.strict:
        if st.upper:
            s2.add({st.var: 1, aux: 1}, "<=", 1)
        else:
            s2.add({st.var: 1, aux: -1}, ">=", 0)
    out = _closed(s2, {aux: 1}, maximize=True)
    if out is None:
        return None, None
    point, t = out
    point.pop(aux)
    return point, t


def lp_feasible(sys: LinearSystem) -> FeasibilityResult:
    out = _closed(sys)
    if out is None:
        return FeasibilityResult(False, note="closed system infeasible")
    point, _ = out
    if not sys.strict:
        assert sys.satisfied_by(point)
        return FeasibilityResult(True, point)
    point, t = _strict_slack(sys)
    if t is None or t <= 0:
        return FeasibilityResult(False, note="strict rows cannot all hold")
    assert sys.satisfied_by(point)
    return FeasibilityResult(True, point, note=f"strict slack {t}")


def lp_extremize(sys: LinearSystem, vertex: str) -> Extremum:
    """Exact inf and sup of one variable; ``*_attained`` tells whether the strict
    rows allow the bound itself."""
    if not lp_feasible(sys).feasible:
        raise InfeasibleSystem("system is infeasible")
    lo = _closed(sys, {vertex: 1}, maximize=False)[1]
    hi = _closed(sys, {vertex: 1}, maximize=True)[1]
    lo_att = hi_att = True
    if sys.strict:
        pin_lo = Row(((vertex, F1),), "=", lo)
        pin_hi = Row(((vertex, F1),), "=", hi)
        _, t = _strict_slack(sys, [pin_lo])
        lo_att = t is not None and t > 0
        _, t = _strict_slack(sys, [pin_hi])
        hi_att = t is not None and t > 0
    return Extremum(lo, hi, lo_att, hi_att)
