# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Signatures mirror :mod:`harmkit._kernels._py`."""
import numpy as np

from libc.math cimport fabs, pow as cpow


cdef inline double _width(double x, const double[:] centers, const double[:] floors,
                          double grading, double cap) noexcept nogil:
    cdef double w = cap
    cdef double v
    cdef Py_ssize_t i
    for i in range(centers.shape[0]):
        v = grading * fabs(x - centers[i])
        if v < floors[i]:
            v = floors[i]
        if v < w:
            w = v
    return w


def march_edges(double a, double b, const double[:] centers, const double[:] floors,
                double grading, double cap, Py_ssize_t max_panels):
    cdef Py_ssize_t count = 1
    cdef double x = a
    cdef double w
    with nogil:
        while x < b:
            w = _width(x, centers, floors, grading, cap)
            if b - x <= w:
                x = b
            else:
                x = x + w
            count += 1
            if count > max_panels + 1:
                break
    if count > max_panels + 1:
        raise OverflowError("panel budget exceeded")
    out = np.empty(count, dtype=np.float64)
    cdef double[:] edges = out
    cdef Py_ssize_t k = 0
    x = a
    edges[0] = a
    with nogil:
        while x < b:
            w = _width(x, centers, floors, grading, cap)
            if b - x <= w:
                x = b
            else:
                x = x + w
            k += 1
            edges[k] = x
    return out


def cauchy_truncated(const double complex[:] a, const double complex[:] b, Py_ssize_t n_out):
    out = np.zeros(n_out, dtype=np.complex128)
    cdef double complex[:] c = out
    cdef Py_ssize_t k, j, lo, hi, na = a.shape[0], nb = b.shape[0]
    cdef double sr, si
    with nogil:
        for k in range(n_out):
            # real arithmetic avoids the complex temporaries
            sr = 0.0
            si = 0.0
            lo = k - nb + 1 if k - nb + 1 > 0 else 0
            hi = k + 1 if k + 1 < na else na
            for j in range(lo, hi):
                sr = sr + a[j].real * b[k - j].real - a[j].imag * b[k - j].imag
                si = si + a[j].real * b[k - j].imag + a[j].imag * b[k - j].real
            c[k] = sr + 1j * si
    return out


def min_plus(const double[:] f, const double[:, :] d, double j):
    cdef Py_ssize_t n = f.shape[0], x, y
    out = np.empty(n, dtype=np.float64)
    cdef double[:] g = out
    cdef double best, v
    with nogil:
        for x in range(n):
            best = f[0] + j * d[x, 0]
            for y in range(1, n):
                v = f[y] + j * d[x, y]
                if v < best:
                    best = v
            g[x] = best
    return out


def lipschitz_worst(const double[:] f, const double[:, :] d, double C, double order):
    cdef Py_ssize_t n = f.shape[0], x, y, bx = 0, by = 0
    cdef double worst = -1.0e308
    cdef double v
    with nogil:
        for x in range(n):
            for y in range(x + 1, n):
                v = fabs(f[x] - f[y]) - C * cpow(d[x, y], order)
                if v > worst:
                    worst = v
                    bx = x
                    by = y
    return worst, bx, by
