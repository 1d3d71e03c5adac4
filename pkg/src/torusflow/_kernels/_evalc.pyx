# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled off-grid evaluators: streaming per-point mode summation.

Same contract as ``_evalnp``; phases are generated by complex recurrences
(one exp per point per axis) and the negative-row phases reuse conjugates,
so nothing of size npoints x nmodes is ever materialized.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef extern from "complex.h":
    double complex cexp(double complex) nogil
    double creal(double complex) nogil
    double cimag(double complex) nogil
    double complex conj(double complex) nogil


def eval_scalar(block, n1, double scale, x1, x2):
    block = np.ascontiguousarray(block, dtype=np.complex128)
    if block.shape[0] != 2 * block.shape[1] - 1:
        raise ValueError("block rows must be fft-ordered [0..cut, -cut..-1]")
    x1 = np.ascontiguousarray(x1, dtype=np.float64)
    x2 = np.ascontiguousarray(x2, dtype=np.float64)
    out = np.zeros(x1.shape[0], dtype=np.float64)
    _scalar_loop(block, x1, x2, out)
    out *= scale
    return out


def eval_velocity(block, n1, double scale, x1, x2):
    block = np.ascontiguousarray(block, dtype=np.complex128)
    if block.shape[0] != 2 * block.shape[1] - 1:
        raise ValueError("block rows must be fft-ordered [0..cut, -cut..-1]")
    x1 = np.ascontiguousarray(x1, dtype=np.float64)
    x2 = np.ascontiguousarray(x2, dtype=np.float64)
    rows, cols = block.shape
    n1f = np.asarray(n1, dtype=np.float64)
    n2f = np.arange(cols, dtype=np.float64)
    nsq = n1f[:, None] ** 2 + n2f[None, :] ** 2
    nsq[0, 0] = 1.0
    invnsq = 1.0 / nsq
    invnsq[0, 0] = 0.0
    u1 = np.zeros(x1.shape[0], dtype=np.float64)
    u2 = np.zeros(x1.shape[0], dtype=np.float64)
    _velocity_loop(block, n1f, invnsq, x1, x2, u1, u2)
    u1 *= scale / np.pi
    u2 *= scale / np.pi
    return u1, u2


cdef void _scalar_loop(
    const double complex[:, ::1] block,
    const double[::1] x1,
    const double[::1] x2,
    double[::1] out,
):
    cdef Py_ssize_t npts = x1.shape[0]
    cdef Py_ssize_t rows = block.shape[0]
    cdef Py_ssize_t cols = block.shape[1]
    cdef Py_ssize_t cut = cols - 1
    cdef Py_ssize_t p, r, c
    cdef double complex z1, z2, q2, s, ph
    cdef double complex[::1] p1 = np.empty(rows, dtype=np.complex128)
    cdef double acc, w
    cdef double pi_ = np.pi

    for p in range(npts):
        z1 = cexp(1j * pi_ * (x1[p] + 1.0))
        p1[0] = 1.0
        for r in range(1, cut + 1):
            p1[r] = p1[r - 1] * z1
        for r in range(cut + 1, rows):
            p1[r] = conj(p1[rows - r])
        z2 = cexp(1j * pi_ * (x2[p] + 1.0))
        q2 = 1.0
        acc = 0.0
        for c in range(cols):
            s = 0.0
            for r in range(rows):
                s = s + block[r, c] * p1[r]
            w = 1.0 if c == 0 else 2.0
            acc += w * creal(s * q2)
            q2 = q2 * z2
        out[p] = acc


cdef void _velocity_loop(
    const double complex[:, ::1] block,
    const double[::1] n1,
    const double[:, ::1] invnsq,
    const double[::1] x1,
    const double[::1] x2,
    double[::1] out1,
    double[::1] out2,
):
    cdef Py_ssize_t npts = x1.shape[0]
    cdef Py_ssize_t rows = block.shape[0]
    cdef Py_ssize_t cols = block.shape[1]
    cdef Py_ssize_t cut = cols - 1
    cdef Py_ssize_t p, r, c
    cdef double complex z1, z2, q2, q, sa, sb
    cdef double complex[::1] p1 = np.empty(rows, dtype=np.complex128)
    cdef double acc1, acc2, w, d
    cdef double pi_ = np.pi

    for p in range(npts):
        z1 = cexp(1j * pi_ * (x1[p] + 1.0))
        p1[0] = 1.0
        for r in range(1, cut + 1):
            p1[r] = p1[r - 1] * z1
        for r in range(cut + 1, rows):
            p1[r] = conj(p1[rows - r])
        z2 = cexp(1j * pi_ * (x2[p] + 1.0))
        q2 = 1.0
        acc1 = 0.0
        acc2 = 0.0
        for c in range(cols):
            sa = 0.0
            sb = 0.0
            for r in range(rows):
                d = invnsq[r, c]
                q = block[r, c] * p1[r]
                sa = sa + q * d
                sb = sb + q * (n1[r] * d)
            w = 1.0 if c == 0 else 2.0
            # u1 <- -i*n2 * sa, u2 <- +i * sb, both times the column phase
            acc1 += w * creal(-1j * c * sa * q2)
            acc2 += w * creal(1j * sb * q2)
            q2 = q2 * z2
        out1[p] = acc1
        out2[p] = acc2
