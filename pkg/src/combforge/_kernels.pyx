# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for tensor-factor permutations.

Both functions mirror ``combforge._kernels_py`` exactly; the pure-Python
module is the reference and the test-suite checks the two agree.
"""
import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef fused scalar_t:
    double
    double complex


def perm_index_map(const cnp.int64_t[::1] images, Py_ssize_t d):
    """Basis-index map of the factor permutation sending slot j to images[j]."""
    cdef Py_ssize_t m = images.shape[0]
    cdef Py_ssize_t size = 1
    cdef Py_ssize_t j, x, rem, digit, y
    for j in range(m):
        size *= d
    if m == 0:
        return np.zeros(1, dtype=np.int64)
    cdef cnp.int64_t[::1] place = np.empty(m, dtype=np.int64)
    cdef cnp.int64_t[::1] weight = np.empty(m, dtype=np.int64)
    place[m - 1] = 1
    for j in range(m - 2, -1, -1):
        place[j] = place[j + 1] * d
    # input digit j lands in output slot images[j]
    for j in range(m):
        weight[j] = place[images[j]]
    out = np.empty(size, dtype=np.int64)
    cdef cnp.int64_t[::1] out_v = out
    for x in range(size):
        rem = x
        y = 0
        for j in range(m - 1, -1, -1):
            digit = rem % d
            rem = rem // d
            y += digit * weight[j]
        out_v[x] = y
    return out


def perm_sum(const cnp.int64_t[:, ::1] maps, scalar_t[::1] coeffs, Py_ssize_t dim):
    """Dense matrix of sum_p coeffs[p] * P_p, with P_p[maps[p, x], x] = 1."""
    cdef Py_ssize_t n_perm = maps.shape[0]
    cdef Py_ssize_t p, x
    cdef scalar_t c
    if scalar_t is double:
        out = np.zeros((dim, dim), dtype=np.float64)
    else:
        out = np.zeros((dim, dim), dtype=np.complex128)
    cdef scalar_t[:, ::1] out_v = out
    for p in range(n_perm):
        c = coeffs[p]
        if c == 0:
            continue
        for x in range(dim):
            out_v[maps[p, x], x] += c
    return out
