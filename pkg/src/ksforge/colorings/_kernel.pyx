# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of ``_kernel_py.solve``: same propagation order, same
branching order, so both kernels return identical certificates."""
import time

from libc.stdlib cimport malloc, free
from libc.stdint cimport uint64_t, uint32_t

DEF EQ = 0
DEF LE = 1
DEF FORBID = 2
DEF IMPLIES = 3


cdef inline int lowbit_index(uint32_t b) nogil:
    cdef int k = 0
    while not (b >> k) & 1:
        k += 1
    return k


cdef inline int highbit_index(uint32_t b) nogil:
    cdef int k = 31
    while k >= 0 and not (b >> k) & 1:
        k -= 1
    return k


cdef inline int popcount(uint32_t b) nogil:
    cdef int c = 0
    while b:
        b &= b - 1
        c += 1
    return c


cdef struct State:
    int n
    int nv
    int D
    int ncons
    int *w
    int *kinds
    int *cptr
    int *cvars
    int *vptr
    int *vcons
    uint32_t *dom
    uint32_t one
    uint32_t interior
    int *minw
    uint64_t full
    # trail
    int *tvar
    uint32_t *tdom
    int tlen
    # queue (ring)
    int *q
    char *inq
    int qhead
    int qcount


cdef inline void set_dom(State *s, int x, uint32_t new) nogil:
    s.tvar[s.tlen] = x
    s.tdom[s.tlen] = s.dom[x]
    s.tlen += 1
    s.dom[x] = new


cdef inline void push(State *s, int c) nogil:
    if not s.inq[c]:
        s.inq[c] = 1
        s.q[(s.qhead + s.qcount) % s.ncons] = c
        s.qcount += 1


cdef inline void enqueue_var(State *s, int x, int skip) nogil:
    cdef int j, cc
    for j in range(s.vptr[x], s.vptr[x + 1]):
        cc = s.vcons[j]
        if cc != skip:
            push(s, cc)


cdef void clear_queue(State *s) nogil:
    while s.qcount:
        s.inq[s.q[s.qhead]] = 0
        s.qhead = (s.qhead + 1) % s.ncons
        s.qcount -= 1


cdef int change(State *s, int c, int x, uint32_t new) nogil:
    """Apply a domain change; 1 on wipe-out."""
    if new == s.dom[x]:
        return 0
    set_dom(s, x, new)
    if not new:
        return 1
    enqueue_var(s, x, c)
    return 0


cdef int propagate(State *s) nogil:
    cdef int c, kind, a, b, k, i, j, x, y, tot, slack, bit
    cdef uint32_t d, mm, lb, new
    cdef uint64_t acc, nxt
    cdef int did
    while s.qcount:
        c = s.q[s.qhead]
        s.qhead = (s.qhead + 1) % s.ncons
        s.qcount -= 1
        s.inq[c] = 0
        kind = s.kinds[c]
        a = s.cptr[c]
        b = s.cptr[c + 1]
        if kind == FORBID:
            x = s.cvars[a]
            y = s.cvars[a + 1]
            if s.dom[x] == s.one and s.dom[y] & s.one:
                if change(s, c, y, s.dom[y] & ~s.one):
                    return c
            elif s.dom[y] == s.one and s.dom[x] & s.one:
                if change(s, c, x, s.dom[x] & ~s.one):
                    return c
        elif kind == IMPLIES:
            x = s.cvars[a]
            y = s.cvars[a + 1]
            if s.dom[x] == s.one and s.dom[y] & ~s.interior:
                if change(s, c, y, s.dom[y] & s.interior):
                    return c
            elif not (s.dom[y] & s.interior) and s.dom[x] & s.one:
                if change(s, c, x, s.dom[x] & ~s.one):
                    return c
        elif kind == LE:
            tot = 0
            for i in range(a, b):
                tot += s.minw[s.dom[s.cvars[i]]]
            if tot > s.D:
                change(s, c, s.cvars[a], 0)
                return c
            for i in range(a, b):
                x = s.cvars[i]
                d = s.dom[x]
                slack = s.D - tot + s.minw[d]
                new = 0
                mm = d
                while mm:
                    lb = mm & (~mm + 1)
                    if s.w[lowbit_index(lb)] <= slack:
                        new |= lb
                    mm ^= lb
                if new != d:
                    if change(s, c, x, new):
                        return c
        else:
            k = b - a
            did = 0
            for i in range(a, b):
                x = s.cvars[i]
                acc = 1
                for j in range(a, b):
                    if j == i:
                        continue
                    nxt = 0
                    mm = s.dom[s.cvars[j]]
                    while mm:
                        lb = mm & (~mm + 1)
                        nxt |= acc << s.w[lowbit_index(lb)]
                        mm ^= lb
                    acc = nxt & s.full
                    if not acc:
                        break
                d = s.dom[x]
                new = 0
                mm = d
                while mm:
                    lb = mm & (~mm + 1)
                    slack = s.D - s.w[lowbit_index(lb)]
                    if slack >= 0 and (acc >> slack) & 1:
                        new |= lb
                    mm ^= lb
                if new != d:
                    did = 1
                    if change(s, c, x, new):
                        return c
            if did and k > 2:
                push(s, c)
    return -1


def solve(model, long node_limit=10**8, double time_limit=1800.0, bint mrv=False):
    cdef State s
    cdef int n = model.n
    cdef int nv = len(model.weights)
    cdef int ncons = len(model.kinds)
    cdef int i, x, y, best, bc, cnt, r, tl, j, c, conflict
    cdef uint32_t rem, bit
    cdef long nodes = 0
    cdef int *order
    cdef int *fvar
    cdef uint32_t *frem
    cdef int *ftl
    cdef int depth
    t0 = time.monotonic()
    if n == 0:
        return 1, [], 0
    s.n = n
    s.nv = nv
    s.D = model.D
    s.ncons = ncons if ncons > 0 else 1
    s.w = <int *> malloc(nv * sizeof(int))
    s.kinds = <int *> malloc(s.ncons * sizeof(int))
    s.cptr = <int *> malloc((ncons + 1) * sizeof(int))
    s.cvars = <int *> malloc((len(model.cvars) + 1) * sizeof(int))
    s.vptr = <int *> malloc((n + 1) * sizeof(int))
    s.vcons = <int *> malloc((len(model.vcons) + 1) * sizeof(int))
    s.dom = <uint32_t *> malloc(n * sizeof(uint32_t))
    s.minw = <int *> malloc((1 << nv) * sizeof(int))
    s.tvar = <int *> malloc((n * (nv + 2) + 1) * sizeof(int))
    s.tdom = <uint32_t *> malloc((n * (nv + 2) + 1) * sizeof(uint32_t))
    s.q = <int *> malloc(s.ncons * sizeof(int))
    s.inq = <char *> malloc(s.ncons * sizeof(char))
    order = <int *> malloc(n * sizeof(int))
    fvar = <int *> malloc((n + 1) * sizeof(int))
    frem = <uint32_t *> malloc((n + 1) * sizeof(uint32_t))
    ftl = <int *> malloc((n + 1) * sizeof(int))
    try:
        for i in range(nv):
            s.w[i] = model.weights[i]
        for i in range(ncons):
            s.kinds[i] = model.kinds[i]
        for i in range(ncons + 1):
            s.cptr[i] = model.cptr[i]
        for i in range(len(model.cvars)):
            s.cvars[i] = model.cvars[i]
        for i in range(n + 1):
            s.vptr[i] = model.vptr[i]
        for i in range(len(model.vcons)):
            s.vcons[i] = model.vcons[i]
        for i in range(n):
            s.dom[i] = model.dom0[i]
            if s.dom[i] == 0:
                return 0, None, 0
        s.minw[0] = 0
        for r in range(1, 1 << nv):
            best = 1 << 30
            for i in range(nv):
                if (r >> i) & 1 and s.w[i] < best:
                    best = s.w[i]
            s.minw[r] = best
        s.full = (<uint64_t> 1 << (s.D + 1)) - 1
        s.one = model.one_bit
        s.interior = model.interior
        s.tlen = 0
        s.qhead = 0
        s.qcount = 0
        for i in range(s.ncons):
            s.inq[i] = 0
        for i in range(ncons):
            push(&s, i)
        for i, x in enumerate(sorted(range(n), key=model.rank.__getitem__)):
            order[i] = x
        if propagate(&s) >= 0:
            return 0, None, 0

        depth = 0
        x = _pick(&s, order, mrv)
        if x < 0:
            return 1, [s.dom[i] for i in range(n)], 0
        fvar[0] = x
        frem[0] = s.dom[x]
        ftl[0] = s.tlen
        depth = 1
        while depth:
            x = fvar[depth - 1]
            rem = frem[depth - 1]
            tl = ftl[depth - 1]
            while s.tlen > tl:
                s.tlen -= 1
                s.dom[s.tvar[s.tlen]] = s.tdom[s.tlen]
            if not rem:
                depth -= 1
                continue
            bit = (<uint32_t> 1) << highbit_index(rem)
            frem[depth - 1] = rem & ~bit
            nodes += 1
            if nodes >= node_limit:
                return -1, None, nodes
            if not (nodes & 255) and time.monotonic() - t0 > time_limit:
                return -1, None, nodes
            set_dom(&s, x, bit)
            enqueue_var(&s, x, -1)
            conflict = propagate(&s)
            if conflict >= 0:
                clear_queue(&s)
                continue
            y = _pick(&s, order, mrv)
            if y < 0:
                return 1, [s.dom[i] for i in range(n)], nodes
            fvar[depth] = y
            frem[depth] = s.dom[y]
            ftl[depth] = s.tlen
            depth += 1
        return 0, None, nodes
    finally:
        free(s.w); free(s.kinds); free(s.cptr); free(s.cvars); free(s.vptr); free(s.vcons)
        free(s.dom); free(s.minw); free(s.tvar); free(s.tdom); free(s.q); free(s.inq)
        free(order); free(fvar); free(frem); free(ftl)


cdef int _pick(State *s, int *order, bint mrv) nogil:
    cdef int i, x, c, best = -1, bc = 1000
    for i in range(s.n):
        x = order[i]
        if s.dom[x] & (s.dom[x] - 1):
            if not mrv:
                return x
            c = popcount(s.dom[x])
            if c < bc:
                best = x
                bc = c
                if c == 2:
                    break
    return best
