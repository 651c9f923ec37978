# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Walsh-Hadamard butterflies over contiguous 1-D buffers.

Unnormalized, in place, length a power of two; same contract as the numpy
fallback in _fwht_py. Two entry points because memoryview typing is static.
"""


def fwht_complex(double complex[::1] a):
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t h = 1, i, j
    cdef double complex lo, hi
    while h < n:
        for i in range(0, n, 2 * h):
            for j in range(i, i + h):
                lo = a[j]
                hi = a[j + h]
                a[j] = lo + hi
                a[j + h] = lo - hi
        h *= 2


def fwht_real(double[::1] a):
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t h = 1, i, j
    cdef double lo, hi
    while h < n:
        for i in range(0, n, 2 * h):
            for j in range(i, i + h):
                lo = a[j]
                hi = a[j + h]
                a[j] = lo + hi
                a[j + h] = lo - hi
        h *= 2
