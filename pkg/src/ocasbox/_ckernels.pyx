# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: Walsh/Moebius butterflies and the orthogonality scan."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint8_t, uint16_t, uint32_t, uint64_t, int64_t
from libc.stdlib cimport calloc, free

cnp.import_array()

NAME = "cython"

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

# left rules processed per pass over the right rules; keeps each right
# table hot in cache across several left rules
cdef enum:
    LEFT_TILE = 32


def fwht(values):
    cdef cnp.ndarray arr = np.array(values, dtype=np.int64, copy=True)
    cdef int64_t[:, ::1] a = arr.reshape(-1, arr.shape[arr.ndim - 1])
    cdef Py_ssize_t rows = a.shape[0], size = a.shape[1]
    cdef Py_ssize_t r, h, i, j
    cdef int64_t x, y
    with nogil:
        for r in range(rows):
            h = 1
            while h < size:
                i = 0
                while i < size:
                    for j in range(i, i + h):
                        x = a[r, j]
                        y = a[r, j + h]
                        a[r, j] = x + y
                        a[r, j + h] = x - y
                    i += 2 * h
                h *= 2
    return arr


def mobius(bits):
    cdef cnp.ndarray arr = np.array(bits, dtype=np.uint8, copy=True)
    cdef uint8_t[:, ::1] a = arr.reshape(-1, arr.shape[arr.ndim - 1])
    cdef Py_ssize_t rows = a.shape[0], size = a.shape[1]
    cdef Py_ssize_t r, h, i, j
    with nogil:
        for r in range(rows):
            h = 1
            while h < size:
                i = 0
                while i < size:
                    for j in range(i, i + h):
                        a[r, j + h] ^= a[r, j]
                    i += 2 * h
                h *= 2
    return arr


cdef inline bint _pairwise_balanced(uint64_t f, uint64_t g, uint64_t full, int quarter) nogil:
    cdef uint64_t nf = ~f & full
    cdef uint64_t ng = ~g & full
    return (__builtin_popcountll(f & g) == quarter
            and __builtin_popcountll(f & ng) == quarter
            and __builtin_popcountll(nf & g) == quarter
            and __builtin_popcountll(nf & ng) == quarter)


def scan_block(const uint8_t[:, ::1] tables, truth, left, right, int b, bint use_pb):
    cdef const uint64_t[::1] tt = np.ascontiguousarray(truth, dtype=np.uint64)
    cdef const int64_t[::1] lidx = np.ascontiguousarray(left, dtype=np.int64)
    cdef const int64_t[::1] ridx = np.ascontiguousarray(right, dtype=np.int64)
    cdef Py_ssize_t nl = lidx.shape[0], nr = ridx.shape[0], size = tables.shape[1]
    cdef int d = b + 1
    cdef int quarter = 1 << (d - 2)
    cdef uint64_t full = <uint64_t>0xFFFFFFFFFFFFFFFF if d == 6 else ((<uint64_t>1 << (1 << d)) - 1)
    cdef cnp.ndarray pb_arr = np.zeros(nl, dtype=np.int64)
    cdef int64_t[::1] pb = pb_arr
    cdef Py_ssize_t cap = 64, count = 0
    cdef cnp.ndarray hit_l = np.empty(cap, dtype=np.int64)
    cdef cnp.ndarray hit_r = np.empty(cap, dtype=np.int64)
    cdef int64_t[::1] hl = hit_l
    cdef int64_t[::1] hr = hit_r
    cdef uint32_t* stamp = <uint32_t*>calloc(size, sizeof(uint32_t))
    cdef uint32_t epoch = 0
    cdef Py_ssize_t t0, t1, jj, ii, x
    cdef int64_t i, j
    cdef const uint8_t* frow
    cdef const uint8_t* grow
    cdef uint32_t code
    cdef bint ok, bal
    if stamp == NULL:
        raise MemoryError()
    try:
        t0 = 0
        while t0 < nl:
            t1 = min(t0 + LEFT_TILE, nl)
            for jj in range(nr):
                j = ridx[jj]
                grow = &tables[j, 0]
                for ii in range(t0, t1):
                    i = lidx[ii]
                    bal = _pairwise_balanced(tt[i], tt[j], full, quarter)
                    if bal:
                        pb[ii] += 1
                    elif use_pb:
                        continue
                    frow = &tables[i, 0]
                    epoch += 1
                    if epoch == 0:
                        for x in range(size):
                            stamp[x] = 0
                        epoch = 1
                    ok = True
                    for x in range(size):
                        code = (<uint32_t>frow[x] << b) | grow[x]
                        if stamp[code] == epoch:
                            ok = False
                            break
                        stamp[code] = epoch
                    if ok:
                        if count == cap:
                            cap *= 2
                            hit_l = np.resize(hit_l, cap)
                            hit_r = np.resize(hit_r, cap)
                            hl = hit_l
                            hr = hit_r
                        hl[count] = ii
                        hr[count] = jj
                        count += 1
            t0 = t1
    finally:
        free(stamp)
    # order hits by (left position, right position) like the fallback
    lpos = hit_l[:count]
    rpos = hit_r[:count]
    order = np.lexsort((rpos, lpos))
    lsel = np.asarray(lidx)[lpos[order]]
    rsel = np.asarray(ridx)[rpos[order]]
    return pb_arr, lsel.astype(np.int64), rsel.astype(np.int64)
