# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled closure kernel.

Same contract and enumeration order as ``_closure_py.closure``; rows are
hashed in an open-addressing table keyed on padded 8-byte words.
"""

import numpy as np

from libc.stdint cimport uint8_t, uint64_t, int32_t, int64_t
from libc.string cimport memcmp, memcpy, memset

from .errors import CapExceeded


cdef inline uint64_t _mix(uint64_t h) noexcept nogil:
    h ^= h >> 33
    h *= 0xff51afd7ed558ccdULL
    h ^= h >> 33
    h *= 0xc4ceb9fe1a85ec53ULL
    h ^= h >> 33
    return h


cdef inline uint64_t _hash_row(const uint8_t* row, Py_ssize_t nwords) noexcept nogil:
    cdef uint64_t h = 0x9e3779b97f4a7c15ULL
    cdef uint64_t w
    cdef Py_ssize_t i
    for i in range(nwords):
        memcpy(&w, row + 8 * i, 8)
        h = _mix(h ^ w) + <uint64_t>i
    return h


cdef class _Store:
    cdef object rows_arr
    cdef uint8_t[:, ::1] rows
    cdef object pop_arr
    cdef int32_t[::1] pop
    cdef object pargs_arr
    cdef int32_t[:, ::1] pargs
    cdef object slots_arr
    cdef int32_t[::1] slots
    cdef Py_ssize_t count, L, Lp, nwords, maxar
    cdef uint64_t mask
    cdef Py_ssize_t cap

    def __init__(self, Py_ssize_t L, Py_ssize_t maxar, Py_ssize_t cap):
        self.L = L
        self.Lp = max(8, ((L + 7) // 8) * 8)
        self.nwords = self.Lp // 8
        self.maxar = maxar
        self.cap = cap
        self.count = 0
        self.rows_arr = np.zeros((64, self.Lp), dtype=np.uint8)
        self.rows = self.rows_arr
        self.pop_arr = np.full(64, -1, dtype=np.int32)
        self.pop = self.pop_arr
        self.pargs_arr = np.full((64, maxar), -1, dtype=np.int32)
        self.pargs = self.pargs_arr
        self.slots_arr = np.full(256, -1, dtype=np.int32)
        self.slots = self.slots_arr
        self.mask = 255

    cdef void _grow_rows(self):
        cdef Py_ssize_t newcap = 2 * self.rows.shape[0]
        rows = np.zeros((newcap, self.Lp), dtype=np.uint8)
        rows[: self.count] = self.rows_arr[: self.count]
        pop = np.full(newcap, -1, dtype=np.int32)
        pop[: self.count] = self.pop_arr[: self.count]
        pargs = np.full((newcap, self.maxar), -1, dtype=np.int32)
        pargs[: self.count] = self.pargs_arr[: self.count]
        self.rows_arr = rows
        self.rows = rows
        self.pop_arr = pop
        self.pop = pop
        self.pargs_arr = pargs
        self.pargs = pargs

    cdef void _rehash(self):
        cdef Py_ssize_t nslots = 2 * self.slots.shape[0]
        cdef Py_ssize_t i
        cdef uint64_t h
        self.slots_arr = np.full(nslots, -1, dtype=np.int32)
        self.slots = self.slots_arr
        self.mask = <uint64_t>(nslots - 1)
        for i in range(self.count):
            h = _hash_row(&self.rows[i, 0], self.nwords) & self.mask
            while self.slots[h] != -1:
                h = (h + 1) & self.mask
            self.slots[h] = <int32_t>i

    cdef Py_ssize_t add(self, const uint8_t* row, int op, const int64_t* args, int nargs) except -2:
        """Insert ``row`` (padded to Lp); return -1 if it was already present."""
        cdef uint64_t h = _hash_row(row, self.nwords) & self.mask
        cdef int32_t s
        cdef Py_ssize_t i, j
        while True:
            s = self.slots[h]
            if s == -1:
                break
            if memcmp(&self.rows[s, 0], row, self.Lp) == 0:
                return -1
            h = (h + 1) & self.mask
        if self.count >= self.cap:
            raise CapExceeded(self.cap)
        if self.count == self.rows.shape[0]:
            self._grow_rows()
        i = self.count
        memcpy(&self.rows[i, 0], row, self.Lp)
        self.pop[i] = op
        for j in range(nargs):
            self.pargs[i, j] = <int32_t>args[j]
        self.slots[h] = <int32_t>i
        self.count += 1
        if 2 * self.count > self.slots.shape[0]:
            self._rehash()
        return i


def closure(Py_ssize_t size, ops, seeds, Py_ssize_t cap):
    """Close ``seeds`` under componentwise ``ops``; see ``_closure_py.closure``."""
    seeds_arr = np.ascontiguousarray(seeds, dtype=np.uint8)
    if seeds_arr.ndim != 2:
        raise ValueError("seeds must be a 2-d array")
    if size > 256:
        raise ValueError("compiled kernel supports universes of size <= 256")
    cdef Py_ssize_t L = seeds_arr.shape[1]
    cdef Py_ssize_t maxar = max([ar for ar, _ in ops] + [1])
    cdef _Store st = _Store(L, maxar, cap)
    cdef Py_ssize_t Lp = st.Lp

    cand_arr = np.zeros(Lp, dtype=np.uint8)
    cdef uint8_t[::1] cand = cand_arr
    partial_arr = np.zeros(max(L, 1), dtype=np.int32)
    cdef int32_t[::1] partial = partial_arr
    args_arr = np.zeros(maxar, dtype=np.int64)
    cdef int64_t[::1] args = args_arr
    starts_arr = np.zeros(maxar, dtype=np.int64)
    cdef int64_t[::1] starts = starts_arr
    stops_arr = np.zeros(maxar, dtype=np.int64)
    cdef int64_t[::1] stops = stops_arr

    cdef uint8_t[:, ::1] sv = seeds_arr
    cdef Py_ssize_t s, c, j, oi, p, ar, lo, hi, last
    cdef int64_t a, weight
    cdef const uint8_t[::1] tab
    cdef const uint8_t* erow
    cdef bint done

    for s in range(seeds_arr.shape[0]):
        memset(&cand[0], 0, Lp)
        for c in range(L):
            cand[c] = sv[s, c]
        args[0] = s
        st.add(&cand[0], -1, &args[0], 1)

    tables = [np.ascontiguousarray(t, dtype=np.uint8) for _, t in ops]
    arities = [int(ar) for ar, _ in ops]
    for oi in range(len(arities)):
        if arities[oi] == 0:
            tab = tables[oi]
            memset(&cand[0], 0, Lp)
            for c in range(L):
                cand[c] = tab[0]
            st.add(&cand[0], <int>oi, &args[0], 0)

    lo = 0
    hi = st.count
    while lo < hi:
        for oi in range(len(arities)):
            ar = arities[oi]
            if ar == 0:
                continue
            tab = tables[oi]
            last = ar - 1
            for p in range(ar):
                for j in range(ar):
                    if j < p:
                        starts[j] = 0
                        stops[j] = lo
                    elif j == p:
                        starts[j] = lo
                        stops[j] = hi
                    else:
                        starts[j] = 0
                        stops[j] = hi
                done = False
                for j in range(ar):
                    if starts[j] >= stops[j]:
                        done = True
                    args[j] = starts[j]
                memset(&cand[0], 0, Lp)
                while not done:
                    # outer positions fixed: accumulate their contribution
                    for c in range(L):
                        partial[c] = 0
                    weight = size
                    for j in range(last - 1, -1, -1):
                        erow = &st.rows[args[j], 0]
                        for c in range(L):
                            partial[c] += <int32_t>(erow[c] * weight)
                        weight *= size
                    for a in range(starts[last], stops[last]):
                        args[last] = a
                        erow = &st.rows[a, 0]
                        for c in range(L):
                            cand[c] = tab[partial[c] + erow[c]]
                        st.add(&cand[0], <int>oi, &args[0], <int>ar)
                    # advance the odometer over positions 0..last-1
                    j = last - 1
                    while j >= 0:
                        args[j] += 1
                        if args[j] < stops[j]:
                            break
                        args[j] = starts[j]
                        j -= 1
                    if j < 0:
                        done = True
        lo = hi
        hi = st.count

    cdef Py_ssize_t n = st.count
    rows = np.ascontiguousarray(st.rows_arr[:n, :L])
    return rows, st.pop_arr[:n].copy(), st.pargs_arr[:n].copy()
