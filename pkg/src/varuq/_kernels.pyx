# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``_fallback`` for the reference semantics."""

import numpy as np
cimport numpy as cnp
from libc.math cimport log

cnp.import_array()

cdef double LN2 = log(2.0)


cdef inline double xlogx(double a) nogil:
    return a * log(a) if a > 0.0 else 0.0


def mixture_moments(atoms, weights, offsets):
    cdef const double[:, ::1] A = np.ascontiguousarray(atoms, dtype=np.float64)
    cdef const double[::1] W = np.ascontiguousarray(weights, dtype=np.float64)
    cdef const long long[::1] O = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef Py_ssize_t n = O.shape[0] - 1
    cdef Py_ssize_t K = A.shape[1]

    mean_a = np.zeros((n, K))
    tu_a = np.empty((n, K))
    au_a = np.zeros((n, K))
    eu_a = np.zeros((n, K))
    ent_a = np.zeros((n, 3))
    cdef double[:, ::1] mean = mean_a
    cdef double[:, ::1] tu = tu_a
    cdef double[:, ::1] au = au_a
    cdef double[:, ::1] eu = eu_a
    cdef double[:, ::1] ent = ent_a

    cdef Py_ssize_t i, j, k, r
    cdef double w, x, d, h, kl, m

    with nogil:
        for i in range(n):
            r = O[i]
            while r < O[i + 1] - 1 and W[r] <= 0.0:
                r += 1
            for j in range(O[i], O[i + 1]):
                w = W[j]
                for k in range(K):
                    mean[i, k] += w * (A[j, k] - A[r, k])
            for k in range(K):
                mean[i, k] += A[r, k]
            h = 0.0
            for k in range(K):
                m = mean[i, k]
                tu[i, k] = m * (1.0 - m)
                h -= xlogx(m)
            ent[i, 0] = h / LN2
            for j in range(O[i], O[i + 1]):
                w = W[j]
                h = 0.0
                kl = 0.0
                for k in range(K):
                    x = A[j, k]
                    au[i, k] += w * (x * (1.0 - x))
                    d = x - mean[i, k]
                    eu[i, k] += w * (d * d)
                    if x > 0.0:
                        h -= x * log(x)
                        if w > 0.0:
                            kl += x * log(x / mean[i, k])
                ent[i, 1] += w * (h / LN2)
                if w > 0.0:
                    ent[i, 2] += w * (kl / LN2)
    return mean_a, tu_a, au_a, eu_a, ent_a


def mann_whitney(id_scores, ood_scores):
    cdef double[::1] a = np.sort(np.asarray(id_scores, dtype=np.float64))
    cdef double[::1] b = np.sort(np.asarray(ood_scores, dtype=np.float64))
    cdef Py_ssize_t na = a.shape[0], nb = b.shape[0]
    cdef Py_ssize_t lo = 0, hi = 0, j
    cdef double greater = 0.0, ties = 0.0
    with nogil:
        for j in range(nb):
            while lo < na and a[lo] < b[j]:
                lo += 1
            if hi < lo:
                hi = lo
            while hi < na and a[hi] <= b[j]:
                hi += 1
            greater += lo
            ties += hi - lo
    return greater, ties
