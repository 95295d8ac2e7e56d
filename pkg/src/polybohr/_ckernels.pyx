# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops over multi-index tables.

Same signatures and summation order as ``_pykernels``.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def monomials(const cnp.int64_t[:, ::1] exps, z):
    cdef Py_ssize_t m = exps.shape[0], n = exps.shape[1], i, j, e
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] zz = np.ascontiguousarray(z, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.ones(m, dtype=np.complex128)
    cdef cnp.int64_t top = 0
    for i in range(m):
        for j in range(n):
            if exps[i, j] > top:
                top = exps[i, j]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] powers = np.ones((n, top + 1), dtype=np.complex128)
    for j in range(n):
        for e in range(1, top + 1):
            powers[j, e] = powers[j, e - 1] * zz[j]
    cdef double complex acc
    for i in range(m):
        acc = 1.0
        for j in range(n):
            acc = acc * powers[j, exps[i, j]]
        out[i] = acc
    return out


def abs_monomials(const cnp.int64_t[:, ::1] exps, rho):
    cdef Py_ssize_t m = exps.shape[0], n = exps.shape[1], i, j, e
    cdef cnp.ndarray[cnp.float64_t, ndim=1] rr = np.ascontiguousarray(rho, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.ones(m, dtype=np.float64)
    cdef cnp.int64_t top = 0
    for i in range(m):
        for j in range(n):
            if exps[i, j] > top:
                top = exps[i, j]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] powers = np.ones((n, top + 1), dtype=np.float64)
    for j in range(n):
        for e in range(1, top + 1):
            powers[j, e] = powers[j, e - 1] * rr[j]
    cdef double acc
    for i in range(m):
        acc = 1.0
        for j in range(n):
            acc = acc * powers[j, exps[i, j]]
        out[i] = acc
    return out


def block_sums(values, const cnp.int64_t[::1] offsets):
    cdef Py_ssize_t nblocks = offsets.shape[0] - 1, k, i
    if np.iscomplexobj(values):
        return _block_sums_complex(np.ascontiguousarray(values, dtype=np.complex128), offsets)
    cdef const double[::1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(nblocks, dtype=np.float64)
    cdef double acc
    for k in range(nblocks):
        acc = 0.0
        for i in range(offsets[k], offsets[k + 1]):
            acc = acc + v[i]
        out[k] = acc
    return out


cdef _block_sums_complex(const double complex[::1] v, const cnp.int64_t[::1] offsets):
    cdef Py_ssize_t nblocks = offsets.shape[0] - 1, k, i
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.zeros(nblocks, dtype=np.complex128)
    cdef double complex acc
    for k in range(nblocks):
        acc = 0.0
        for i in range(offsets[k], offsets[k + 1]):
            acc = acc + v[i]
        out[k] = acc
    return out


def taylor_shift(coeffs, const cnp.int64_t[:, ::1] exps, const cnp.int64_t[:, ::1] succ, z):
    cdef Py_ssize_t m = exps.shape[0], n = exps.shape[1], i, j, idx
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] zz = np.ascontiguousarray(z, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] cur = np.array(coeffs, dtype=np.complex128, copy=True)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] new
    cdef double complex acc, zt, zj
    cdef double binom, g
    cdef long t
    for j in range(n):
        zj = zz[j]
        if zj == 0:
            continue
        new = np.empty(m, dtype=np.complex128)
        for i in range(m):
            acc = cur[i]
            idx = succ[j, i]
            binom = 1.0
            zt = 1.0
            g = <double>exps[i, j]
            t = 0
            while idx >= 0:
                t += 1
                binom = binom * (g + t) / t
                zt = zt * zj
                acc = acc + binom * zt * cur[idx]
                idx = succ[j, idx]
            new[i] = acc
        cur = new
    return cur
