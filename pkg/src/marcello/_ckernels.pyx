# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; same algorithms and iteration order as _pykernels."""

from libc.stdint cimport uint64_t
from libc.string cimport memcpy
from cpython.bytes cimport PyBytes_FromStringAndSize

cdef enum:
    MAXN = 64

cdef extern int __builtin_popcountll(unsigned long long) nogil
cdef extern int __builtin_ctzll(unsigned long long) nogil


cdef inline int popc(uint64_t x) nogil:
    return __builtin_popcountll(x)


cdef inline uint64_t bit(int v) nogil:
    return (<uint64_t>1) << v


cdef struct CanonState:
    int n
    uint64_t adj[MAXN]
    uint64_t best[MAXN]
    int best_lab[MAXN]
    int have_best


cdef void refine(CanonState* st, int* lab, char* cend) nogil:
    # cend[i] == 1 iff position i closes a cell
    cdef int n = st.n
    cdef int ws, we, xs, xe, i, j, k, v, c, split, restart
    cdef uint64_t wmask
    cdef int cnt[MAXN]
    cdef int key
    while True:
        restart = 0
        ws = 0
        while ws < n:
            we = ws
            while not cend[we]:
                we += 1
            wmask = 0
            for i in range(ws, we + 1):
                wmask |= bit(lab[i])
            split = 0
            xs = 0
            while xs < n:
                xe = xs
                while not cend[xe]:
                    xe += 1
                if xe > xs:
                    for i in range(xs, xe + 1):
                        cnt[i] = popc(st.adj[lab[i]] & wmask)
                    c = 0
                    for i in range(xs + 1, xe + 1):
                        if cnt[i] != cnt[xs]:
                            c = 1
                            break
                    if c:
                        split = 1
                        # stable insertion sort by count
                        for i in range(xs + 1, xe + 1):
                            key = cnt[i]
                            v = lab[i]
                            j = i - 1
                            while j >= xs and cnt[j] > key:
                                cnt[j + 1] = cnt[j]
                                lab[j + 1] = lab[j]
                                j -= 1
                            cnt[j + 1] = key
                            lab[j + 1] = v
                        for i in range(xs, xe):
                            if cnt[i] != cnt[i + 1]:
                                cend[i] = 1
                xs = xe + 1
            if split:
                restart = 1
                break
            ws = we + 1
        if not restart:
            return


cdef void search(CanonState* st, int* lab_in, char* cend_in) nogil:
    cdef int n = st.n
    cdef int lab[MAXN]
    cdef char cend[MAXN]
    cdef int lab2[MAXN]
    cdef char cend2[MAXN]
    cdef int pos[MAXN]
    cdef uint64_t rows[MAXN]
    cdef int tried[MAXN]
    cdef int ntried = 0
    cdef int i, j, k, cs, ce, v, u, skip, cmp
    cdef uint64_t r, m
    memcpy(lab, lab_in, n * sizeof(int))
    memcpy(cend, cend_in, n * sizeof(char))
    refine(st, lab, cend)
    cs = -1
    i = 0
    while i < n:
        j = i
        while not cend[j]:
            j += 1
        if j > i:
            cs = i
            ce = j
            break
        i = j + 1
    if cs < 0:
        for k in range(n):
            pos[lab[k]] = k
        for k in range(n):
            r = st.adj[lab[k]]
            m = 0
            while r:
                m |= bit(pos[__builtin_ctzll(r)])
                r &= r - 1
            rows[k] = m
        cmp = 0
        if st.have_best:
            for k in range(n):
                if rows[k] != st.best[k]:
                    cmp = 1 if rows[k] > st.best[k] else -1
                    break
        if not st.have_best or cmp > 0:
            st.have_best = 1
            memcpy(st.best, rows, n * sizeof(uint64_t))
            memcpy(st.best_lab, lab, n * sizeof(int))
        return
    for i in range(cs, ce + 1):
        v = lab[i]
        skip = 0
        for k in range(ntried):
            u = tried[k]
            if (st.adj[u] & ~bit(v)) == (st.adj[v] & ~bit(u)):
                skip = 1
                break
        if skip:
            continue
        tried[ntried] = v
        ntried += 1
        memcpy(lab2, lab, n * sizeof(int))
        memcpy(cend2, cend, n * sizeof(char))
        lab2[cs] = v
        k = cs + 1
        for j in range(cs, ce + 1):
            if lab[j] != v:
                lab2[k] = lab[j]
                k += 1
        cend2[cs] = 1
        search(st, lab2, cend2)


def canonical_labeling(int n, adj):
    cdef CanonState st
    cdef int lab[MAXN]
    cdef char cend[MAXN]
    cdef int i
    st.n = n
    st.have_best = 0
    for i in range(n):
        st.adj[i] = adj[i]
        lab[i] = i
        cend[i] = 0
    cend[n - 1] = 1
    with nogil:
        search(&st, lab, cend)
    return [st.best_lab[i] for i in range(n)]


cdef class _Walker:
    cdef int n
    cdef uint64_t full
    cdef int budgets[MAXN]
    cdef bint saturated
    cdef set seen
    cdef dict out
    cdef int plan_v[MAXN + 1]
    cdef uint64_t plan_s[MAXN + 1]
    cdef int depth

    cdef void record(self, uint64_t* rows):
        cdef int i
        key = tuple([rows[i] for i in range(self.n)])
        if key not in self.out:
            self.out[key] = [(self.plan_v[i], self.plan_s[i]) for i in range(self.depth)]

    cdef void rec(self, uint64_t* rows, uint64_t remaining):
        cdef int n = self.n
        cdef uint64_t buf[MAXN + 1]
        cdef uint64_t new[MAXN]
        cdef uint64_t live = 0, nn, s, t
        cdef int v, cap, pc, complete = 1
        memcpy(buf, rows, n * sizeof(uint64_t))
        buf[n] = remaining
        key = PyBytes_FromStringAndSize(<char*>buf, (n + 1) * sizeof(uint64_t))
        if key in self.seen:
            return
        self.seen.add(key)
        for v in range(n):
            if (rows[v] | bit(v)) != self.full:
                complete = 0
                if (remaining >> v) & 1:
                    live |= bit(v)
        if complete or live == 0:
            self.record(rows)
            return
        for v in range(n):
            if not (live >> v) & 1:
                continue
            nn = self.full & ~rows[v] & ~bit(v)
            cap = popc(nn)
            if self.budgets[v] < cap:
                cap = self.budgets[v]
            s = nn
            while True:
                pc = popc(s)
                if pc == cap or (not self.saturated and pc < cap):
                    memcpy(new, rows, n * sizeof(uint64_t))
                    new[v] |= s
                    t = s
                    while t:
                        new[__builtin_ctzll(t)] |= bit(v)
                        t &= t - 1
                    self.plan_v[self.depth] = v
                    self.plan_s[self.depth] = s
                    self.depth += 1
                    self.rec(new, remaining & ~bit(v))
                    self.depth -= 1
                if s == 0:
                    break
                s = (s - 1) & nn


def enumerate_outcomes(int n, adj, budgets, xmask, bint saturated):
    cdef _Walker w = _Walker()
    cdef uint64_t rows[MAXN]
    cdef int i
    w.n = n
    w.full = ((<uint64_t>1) << n) - 1 if n < 64 else <uint64_t>0xFFFFFFFFFFFFFFFF
    w.saturated = saturated
    w.seen = set()
    w.out = {}
    w.depth = 0
    for i in range(n):
        rows[i] = adj[i]
        w.budgets[i] = budgets[i]
    w.rec(rows, <uint64_t>xmask)
    return w.out, len(w.seen)
