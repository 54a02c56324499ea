"""Reference search kernel: GAC propagation over sum constraints plus the
typed binary rules, driven by an iterative depth-first search.

Domains are bitmasks over value indices (bit k <=> alphabet.values[k]).
Values are integer weights summing to the target ``D`` on a basis.
"""
from __future__ import annotations

import time

EQ, LE, FORBID, IMPLIES = 0, 1, 2, 3
SAT, UNSAT, TIMEOUT = 1, 0, -1


class Model:
    """Flat constraint model shared by both kernels (picklable)."""

    __slots__ = ("n", "weights", "D", "kinds", "cptr", "cvars", "vptr", "vcons",
                 "dom0", "rank", "one_bit", "interior")

    def __init__(self, n, weights, D, constraints, dom0, rank):
        self.n = n
        self.weights = list(weights)
        self.D = D
        self.kinds = []
        self.cptr = [0]
        self.cvars = []
        per_var = [[] for _ in range(n)]
        for ci, (kind, scope) in enumerate(constraints):
            self.kinds.append(kind)
            self.cvars.extend(scope)
            self.cptr.append(len(self.cvars))
            for x in scope:
                per_var[x].append(ci)
        self.vptr = [0]
        self.vcons = []
        for lst in per_var:
            self.vcons.extend(lst)
            self.vptr.append(len(self.vcons))
        self.dom0 = list(dom0)
        self.rank = list(rank)
        one = [k for k, w in enumerate(self.weights) if w == D]
        self.one_bit = (1 << one[0]) if one else 0
        allbits = (1 << len(self.weights)) - 1
        self.interior = allbits & ~1 & ~self.one_bit

    def __getstate__(self):
        return {s: getattr(self, s) for s in self.__slots__}

    def __setstate__(self, st):
        for k, v in st.items():
            setattr(self, k, v)


def _sumset(doms, w, full):
    """Bitset of reachable sums (capped at D) over the given domains."""
    acc = 1
    for m in doms:
        nxt = 0
        while m:
            b = m & -m
            nxt |= acc << w[b.bit_length() - 1]
            m ^= b
        acc = nxt & full
        if not acc:
            return 0
    return acc


class Propagator:
    def __init__(self, model: Model, trace: bool = False):
        self.m = model
        self.trace = [] if trace else None
        nv = len(model.weights)
        w = model.weights
        self.minw = [0] * (1 << nv)
        for mask in range(1, 1 << nv):
            self.minw[mask] = min(w[k] for k in range(nv) if mask >> k & 1)
        self.full = (1 << (model.D + 1)) - 1

    def run(self, dom, trail, queue, inq):
        """Propagate to a fixpoint. Returns the conflicting constraint or -1."""
        m = self.m
        kinds, cptr, cvars, vptr, vcons = m.kinds, m.cptr, m.cvars, m.vptr, m.vcons
        w, D, one, interior = m.weights, m.D, m.one_bit, m.interior
        minw, full, tr = self.minw, self.full, self.trace
        head = 0
        while head < len(queue):
            c = queue[head]
            head += 1
            inq[c] = False
            kind = kinds[c]
            scope = cvars[cptr[c]:cptr[c + 1]]
            changed = ()
            if kind == FORBID:
                u, v = scope
                changed = []
                if dom[u] == one and dom[v] & one:
                    changed.append((v, dom[v] & ~one))
                elif dom[v] == one and dom[u] & one:
                    changed.append((u, dom[u] & ~one))
            elif kind == IMPLIES:
                u, v = scope
                changed = []
                if dom[u] == one and dom[v] & ~interior:
                    changed.append((v, dom[v] & interior))
                elif not dom[v] & interior and dom[u] & one:
                    changed.append((u, dom[u] & ~one))
            elif kind == LE:
                tot = 0
                for x in scope:
                    tot += minw[dom[x]]
                if tot > D:
                    changed = [(scope[0], 0)]
                else:
                    changed = []
                    for x in scope:
                        slack = D - tot + minw[dom[x]]
                        d = dom[x]
                        new = 0
                        mm = d
                        while mm:
                            b = mm & -mm
                            if w[b.bit_length() - 1] <= slack:
                                new |= b
                            mm ^= b
                        if new != d:
                            changed.append((x, new))
            else:
                changed = []
                k = len(scope)
                did = False
                for i in range(k):
                    x = scope[i]
                    others = _sumset([dom[scope[j]] for j in range(k) if j != i], w, full)
                    d = dom[x]
                    new = 0
                    mm = d
                    while mm:
                        b = mm & -mm
                        t = D - w[b.bit_length() - 1]
                        if t >= 0 and others >> t & 1:
                            new |= b
                        mm ^= b
                    if new != d:
                        # apply immediately so later positions see the tighter domain
                        did = True
                        trail.append((x, d))
                        dom[x] = new
                        if tr is not None:
                            tr.append(("prune", c, x, d & ~new))
                        if not new:
                            if tr is not None:
                                tr.append(("conflict", c))
                            return c
                        for j in range(vptr[x], vptr[x + 1]):
                            cc = vcons[j]
                            if cc != c and not inq[cc]:
                                inq[cc] = True
                                queue.append(cc)
                if did and k > 2:
                    inq[c] = True
                    queue.append(c)
                continue
            for x, new in changed:
                d = dom[x]
                if new == d:
                    continue
                trail.append((x, d))
                dom[x] = new
                if tr is not None:
                    tr.append(("prune", c, x, d & ~new))
                if not new:
                    if tr is not None:
                        tr.append(("conflict", c))
                    return c
                for j in range(vptr[x], vptr[x + 1]):
                    cc = vcons[j]
                    if cc != c and not inq[cc]:
                        inq[cc] = True
                        queue.append(cc)
        return -1


def root_propagate(model: Model, trace: bool = True):
    """Propagate the initial domains once; returns (domains, conflict, events)."""
    prop = Propagator(model, trace)
    dom = list(model.dom0)
    if any(d == 0 for d in dom):
        return dom, -2, prop.trace or []
    queue = list(range(len(model.kinds)))
    inq = [True] * len(queue)
    conflict = prop.run(dom, [], queue, inq)
    return dom, conflict, prop.trace or []


def solve(model: Model, node_limit: int = 10**8, time_limit: float = 1800.0, mrv: bool = False):
    """Return (status, domains, nodes)."""
    t0 = time.monotonic()
    prop = Propagator(model)
    dom = list(model.dom0)
    n = model.n
    if any(d == 0 for d in dom):
        return UNSAT, None, 0
    ncons = len(model.kinds)
    inq = [False] * ncons
    trail: list = []
    queue = list(range(ncons))
    for c in queue:
        inq[c] = True
    if prop.run(dom, trail, queue, inq) >= 0:
        return UNSAT, None, 0
    rank = model.rank
    order = sorted(range(n), key=rank.__getitem__)
    vptr, vcons = model.vptr, model.vcons
    nodes = 0
    frames = []  # [var, remaining mask, trail length]

    def pick():
        if mrv:
            best, bkey = -1, None
            for x in order:
                c = dom[x].bit_count()
                if c > 1 and (bkey is None or c < bkey):
                    best, bkey = x, c
                    if c == 2:
                        break
            return best
        for x in order:
            if dom[x] & (dom[x] - 1):
                return x
        return -1

    x = pick()
    if x < 0:
        return SAT, dom, nodes
    frames.append([x, dom[x], len(trail)])
    while frames:
        fr = frames[-1]
        x, rem, tl = fr
        while len(trail) > tl:
            y, d = trail.pop()
            dom[y] = d
        if not rem:
            frames.pop()
            continue
        b = 1 << (rem.bit_length() - 1)
        fr[1] = rem & ~b
        nodes += 1
        if nodes >= node_limit or (not nodes & 255 and time.monotonic() - t0 > time_limit):
            return TIMEOUT, None, nodes
        trail.append((x, dom[x]))
        dom[x] = b
        queue.clear()
        for j in range(vptr[x], vptr[x + 1]):
            c = vcons[j]
            inq[c] = True
            queue.append(c)
        conflict = prop.run(dom, trail, queue, inq)
        if conflict >= 0:
            for c in queue:
                inq[c] = False
            continue
        y = pick()
        if y < 0:
            return SAT, dom, nodes
        frames.append([y, dom[y], len(trail)])
    return UNSAT, None, nodes
