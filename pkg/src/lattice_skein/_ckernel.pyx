# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled smoothing kernel; same contract as ``_pykernel``."""

from libc.stdlib cimport malloc, free
from libc.string cimport memset

from lattice_skein._pykernel import wiring

ctypedef unsigned long long u64

cdef int _smooth(int m, int n, u64 code, bint flip, const int* ext, const int* entry,
                 int* inner, char* seen, unsigned char* partner) noexcept nogil:
    cdef int base = 4 * m * n
    cdef int size = 2 * (m + n)
    cdef int c, o, k, p, other, start, loops = 0
    cdef bint plus
    for c in range(m * n):
        plus = (code >> c) & 1
        if flip:
            plus = not plus
        o = 4 * c
        if plus:
            inner[o] = o + 1
            inner[o + 1] = o
            inner[o + 2] = o + 3
            inner[o + 3] = o + 2
        else:
            inner[o] = o + 3
            inner[o + 3] = o
            inner[o + 1] = o + 2
            inner[o + 2] = o + 1
    memset(seen, 0, base)
    for k in range(size):
        partner[k] = 255
    for k in range(size):
        if partner[k] != 255:
            continue
        p = entry[k]
        if p < 0:
            other = -1 - p
        else:
            while True:
                seen[p] = 1
                p = inner[p]
                seen[p] = 1
                p = ext[p]
                if p >= base:
                    other = p - base
                    break
        partner[k] = <unsigned char>other
        partner[other] = <unsigned char>k
    for start in range(base):
        if seen[start]:
            continue
        loops += 1
        p = start
        while not seen[p]:
            seen[p] = 1
            p = inner[p]
            seen[p] = 1
            p = ext[p]
    return loops


cdef class _Workspace:
    cdef int m, n, base, size
    cdef int* ext
    cdef int* entry
    cdef int* inner
    cdef char* seen
    cdef unsigned char* partner

    def __cinit__(self, int m, int n):
        if m * n > 62 or 2 * (m + n) > 254:
            raise ValueError("grid too large for the compiled kernel")
        self.m, self.n = m, n
        self.base = 4 * m * n
        self.size = 2 * (m + n)
        ext, entry = wiring(m, n)
        self.ext = <int*>malloc(max(self.base, 1) * sizeof(int))
        self.entry = <int*>malloc(self.size * sizeof(int))
        self.inner = <int*>malloc(max(self.base, 1) * sizeof(int))
        self.seen = <char*>malloc(max(self.base, 1))
        self.partner = <unsigned char*>malloc(self.size)
        if not (self.ext and self.entry and self.inner and self.seen and self.partner):
            raise MemoryError()
        cdef int i
        for i in range(self.base):
            self.ext[i] = ext[i]
        for i in range(self.size):
            self.entry[i] = entry[i]

    def __dealloc__(self):
        free(self.ext)
        free(self.entry)
        free(self.inner)
        free(self.seen)
        free(self.partner)

    cdef int run(self, u64 code, bint flip):
        return _smooth(self.m, self.n, code, flip, self.ext, self.entry,
                       self.inner, self.seen, self.partner)

    cdef bytes key(self):
        return self.partner[:self.size]


def smooth(int m, int n, code, bint flip=False):
    cdef _Workspace ws = _Workspace(m, n)
    cdef int loops = ws.run(<u64>code, flip)
    return tuple(ws.key()), loops


cdef inline int _popcount(u64 x) noexcept nogil:
    cdef int c = 0
    while x:
        x &= x - 1
        c += 1
    return c


def accumulate_full(int m, int n, start, stop, bint flip=False):
    cdef _Workspace ws = _Workspace(m, n)
    cdef u64 code
    cdef u64 lo = start, hi = stop
    cdef int loops, pn, mn = m * n
    cdef dict out = {}
    cdef dict bucket
    code = lo
    while code < hi:
        loops = ws.run(code, flip)
        pn = 2 * _popcount(code) - mn
        bucket = out.get(ws.key())
        if bucket is None:
            bucket = {}
            out[ws.key()] = bucket
        k = (pn, loops)
        bucket[k] = bucket.get(k, 0) + 1
        code += 1
    return out


def accumulate_restricted(int m, int n, start, stop, bint flip=False):
    cdef _Workspace ws = _Workspace(m, n)
    cdef u64 index, rest, code
    cdef u64 lo = start, hi = stop
    cdef int i, b, weight, loops, pn, mn = m * n
    cdef dict out = {}
    cdef dict bucket
    index = lo
    while index < hi:
        rest = index
        code = 0
        weight = 0
        for i in range(m):
            b = rest % (n + 1)
            rest //= (n + 1)
            weight += b
            code |= ((<u64>1 << b) - 1) << (i * n)
        loops = ws.run(code, flip)
        pn = 2 * weight - mn
        bucket = out.get(ws.key())
        if bucket is None:
            bucket = {}
            out[ws.key()] = bucket
        k = (pn, loops)
        bucket[k] = bucket.get(k, 0) + 1
        index += 1
    return out


def scan_restricted(int m, int n, bytes target, start, stop, bint flip=False):
    cdef _Workspace ws = _Workspace(m, n)
    cdef u64 index, rest, code
    cdef u64 lo = start, hi = stop
    cdef int i, b
    cdef list hits = []
    cdef const unsigned char* t = target
    if len(target) != ws.size:
        return hits
    index = lo
    while index < hi:
        rest = index
        code = 0
        for i in range(m):
            b = rest % (n + 1)
            rest //= (n + 1)
            code |= ((<u64>1 << b) - 1) << (i * n)
        ws.run(code, flip)
        for i in range(ws.size):
            if ws.partner[i] != t[i]:
                break
        else:
            hits.append(index)
        index += 1
    return hits
