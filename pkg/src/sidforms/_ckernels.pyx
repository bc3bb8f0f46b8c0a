# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled counting inner loops; see sidforms._pykernels for the
reference implementations and the layout of the input tables."""

import numpy as np


def count_members(const long long[:, :, ::1] contrib, const unsigned char[::1] mask):
    cdef Py_ssize_t D = contrib.shape[0]
    cdef Py_ssize_t k = contrib.shape[2]
    cdef long long[::1] cur = np.zeros(k, dtype=np.int64)
    cdef Py_ssize_t j
    if D == 0:
        for j in range(k):
            if mask[0] == 0:
                return 0
        return 1
    return _count_rec(contrib, mask, cur, 0, D, contrib.shape[1], k)


cdef long long _count_rec(const long long[:, :, ::1] contrib,
                          const unsigned char[::1] mask,
                          long long[::1] cur,
                          Py_ssize_t d, Py_ssize_t D, Py_ssize_t q,
                          Py_ssize_t k):
    cdef long long total = 0
    cdef Py_ssize_t w, j
    cdef int ok
    if d == D - 1:
        for w in range(q):
            ok = 1
            for j in range(k):
                if mask[cur[j] + contrib[d, w, j]] == 0:
                    ok = 0
                    break
            total += ok
        return total
    for w in range(q):
        for j in range(k):
            cur[j] += contrib[d, w, j]
        total += _count_rec(contrib, mask, cur, d + 1, D, q, k)
        for j in range(k):
            cur[j] -= contrib[d, w, j]
    return total


def count_members_subset(const long long[:, :, ::1] contrib,
                         const unsigned char[::1] mask,
                         const unsigned char[::1] active):
    cdef Py_ssize_t D = contrib.shape[0]
    cdef Py_ssize_t q = contrib.shape[1]
    cdef Py_ssize_t k = contrib.shape[2]
    cdef long long[::1] cur = np.zeros(k, dtype=np.int64)
    cdef Py_ssize_t j, nact = 0
    cdef long long[::1] idx = np.zeros(k, dtype=np.int64)
    for j in range(k):
        if active[j]:
            idx[nact] = j
            nact += 1
    if D == 0:
        for j in range(nact):
            if mask[0] == 0:
                return 0
        return 1
    if nact == 0:
        return <long long> (q ** D)
    return _subset_rec(contrib, mask, idx, nact, cur, 0, D, q, k)


cdef long long _subset_rec(const long long[:, :, ::1] contrib,
                           const unsigned char[::1] mask,
                           const long long[::1] idx, Py_ssize_t nact,
                           long long[::1] cur,
                           Py_ssize_t d, Py_ssize_t D, Py_ssize_t q,
                           Py_ssize_t k):
    cdef long long total = 0
    cdef Py_ssize_t w, j, t
    cdef int ok
    if d == D - 1:
        for w in range(q):
            ok = 1
            for t in range(nact):
                j = idx[t]
                if mask[cur[j] + contrib[d, w, j]] == 0:
                    ok = 0
                    break
            total += ok
        return total
    for w in range(q):
        for j in range(k):
            cur[j] += contrib[d, w, j]
        total += _subset_rec(contrib, mask, idx, nact, cur, d + 1, D, q, k)
        for j in range(k):
            cur[j] -= contrib[d, w, j]
    return total


def pattern_histogram(const long long[:, :, ::1] contrib,
                      const unsigned char[::1] mask,
                      long long[::1] hist):
    cdef Py_ssize_t D = contrib.shape[0]
    cdef Py_ssize_t k = contrib.shape[2]
    cdef long long[::1] cur = np.zeros(k, dtype=np.int64)
    cdef Py_ssize_t j
    cdef Py_ssize_t b = 0
    if D == 0:
        for j in range(k):
            if mask[0]:
                b |= 1 << j
        hist[b] += 1
        return
    _hist_rec(contrib, mask, hist, cur, 0, D, contrib.shape[1], k)


cdef void _hist_rec(const long long[:, :, ::1] contrib,
                    const unsigned char[::1] mask,
                    long long[::1] hist,
                    long long[::1] cur,
                    Py_ssize_t d, Py_ssize_t D, Py_ssize_t q, Py_ssize_t k):
    cdef Py_ssize_t w, j, b
    if d == D - 1:
        for w in range(q):
            b = 0
            for j in range(k):
                if mask[cur[j] + contrib[d, w, j]]:
                    b |= 1 << j
            hist[b] += 1
        return
    for w in range(q):
        for j in range(k):
            cur[j] += contrib[d, w, j]
        _hist_rec(contrib, mask, hist, cur, d + 1, D, q, k)
        for j in range(k):
            cur[j] -= contrib[d, w, j]


def weighted_product_sum(const long long[:, :, ::1] contrib,
                         const double[::1] weights):
    cdef Py_ssize_t D = contrib.shape[0]
    cdef Py_ssize_t k = contrib.shape[2]
    cdef long long[::1] cur = np.zeros(k, dtype=np.int64)
    cdef double prod = 1.0
    cdef Py_ssize_t j
    if D == 0:
        for j in range(k):
            prod *= weights[0]
        return prod
    return _weighted_rec(contrib, weights, cur, 0, D, contrib.shape[1], k)


cdef double _weighted_rec(const long long[:, :, ::1] contrib,
                          const double[::1] weights,
                          long long[::1] cur,
                          Py_ssize_t d, Py_ssize_t D, Py_ssize_t q,
                          Py_ssize_t k):
    cdef double total = 0.0
    cdef double prod
    cdef Py_ssize_t w, j
    if d == D - 1:
        for w in range(q):
            prod = 1.0
            for j in range(k):
                prod *= weights[cur[j] + contrib[d, w, j]]
                if prod == 0.0:
                    break
            total += prod
        return total
    for w in range(q):
        for j in range(k):
            cur[j] += contrib[d, w, j]
        total += _weighted_rec(contrib, weights, cur, d + 1, D, q, k)
        for j in range(k):
            cur[j] -= contrib[d, w, j]
    return total


def count_bruteforce(const long long[:, :, ::1] tab,
                     const unsigned char[::1] zlut,
                     Py_ssize_t n, Py_ssize_t shift):
    cdef Py_ssize_t m = tab.shape[0]
    cdef Py_ssize_t npts = tab.shape[2]
    cdef long long[::1] acc = np.zeros(m, dtype=np.int64)
    if npts == 0:
        return 0
    return _bf_rec(tab, zlut, acc, 0, tab.shape[1], m, npts, n, shift,
                   (1 << shift) - 1)


cdef long long _bf_rec(const long long[:, :, ::1] tab,
                       const unsigned char[::1] zlut,
                       long long[::1] acc,
                       Py_ssize_t lvl, Py_ssize_t k, Py_ssize_t m,
                       Py_ssize_t npts, Py_ssize_t n, Py_ssize_t shift,
                       long long dmask):
    cdef long long total = 0
    cdef long long s
    cdef Py_ssize_t a, r, i
    cdef int ok
    if lvl == k - 1:
        for a in range(npts):
            ok = 1
            for r in range(m):
                s = acc[r] + tab[r, lvl, a]
                for i in range(n):
                    if zlut[(s >> (i * shift)) & dmask] == 0:
                        ok = 0
                        break
                if ok == 0:
                    break
            total += ok
        return total
    for a in range(npts):
        for r in range(m):
            acc[r] += tab[r, lvl, a]
        total += _bf_rec(tab, zlut, acc, lvl + 1, k, m, npts, n, shift, dmask)
        for r in range(m):
            acc[r] -= tab[r, lvl, a]
    return total
