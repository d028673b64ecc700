# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel-sum loops. Mirrors ``_core_py`` exactly in semantics."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, erfc, fabs, sqrt

cnp.import_array()

cdef double INV_SQRT_2PI = 0.3989422804014327
cdef double INV_SQRT_2 = 0.7071067811865476

# kernel codes: 0 epanechnikov, 1 gaussian
# modes: 0 density, 1 cdf, 2 second derivative (gaussian only)


cdef inline double _pdf(double u, int kernel) nogil:
    if kernel == 0:
        if fabs(u) <= 1.0:
            return 0.75 * (1.0 - u * u)
        return 0.0
    return exp(-0.5 * u * u) * INV_SQRT_2PI


cdef inline double _cdf(double u, int kernel) nogil:
    if kernel == 0:
        if u <= -1.0:
            return 0.0
        if u >= 1.0:
            return 1.0
        return 0.75 * (u - u * u * u / 3.0) + 0.5
    return 0.5 * erfc(-u * INV_SQRT_2)


cdef inline double _d2gauss(double u) nogil:
    return (u * u - 1.0) * exp(-0.5 * u * u) * INV_SQRT_2PI


def kernel_sum(const double[::1] data, const double[::1] points, double h, int kernel, int mode):
    cdef Py_ssize_t n = data.shape[0], g = points.shape[0], i, j
    cdef double x, s, inv_h = 1.0 / h
    out = np.empty(g, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for j in range(g):
            x = points[j]
            s = 0.0
            if mode == 0:
                for i in range(n):
                    s += _pdf((x - data[i]) * inv_h, kernel)
            elif mode == 1:
                for i in range(n):
                    s += _cdf((x - data[i]) * inv_h, kernel)
            else:
                for i in range(n):
                    s += _d2gauss((x - data[i]) * inv_h)
            o[j] = s
    return out


def combined_moments(const double[:, ::1] comp, const double[::1] weights,
                     const double[::1] lxi, const double[::1] points,
                     double h, double b, double coef, int kernel):
    cdef Py_ssize_t m = comp.shape[0], n = comp.shape[1], g = points.shape[0]
    cdef Py_ssize_t i, j, r
    cdef double x, kv, s1, s2, inv_h = 1.0 / h, inv_b = 1.0 / b
    out1 = np.empty(g, dtype=np.float64)
    out2 = np.empty(g, dtype=np.float64)
    cdef double[::1] o1 = out1
    cdef double[::1] o2 = out2
    with nogil:
        for j in range(g):
            x = points[j]
            s1 = 0.0
            s2 = 0.0
            for i in range(n):
                kv = 0.0
                for r in range(m):
                    kv += weights[r] * _pdf((x - comp[r, i]) * inv_h, kernel)
                kv -= coef * _d2gauss((x - lxi[i]) * inv_b)
                s1 += kv
                s2 += kv * kv
            o1[j] = s1
            o2[j] = s2
    return out1, out2
