# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled 4x4 kernels for trajectory evaluation.

Same contract as ``milburnosc._fallback``; see that module for the
definitions.  Loops run without the GIL so sweep cells can use threads.
"""
import numpy as np
cimport numpy as cnp

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)
    double cabs(double complex)
    double creal(double complex)
    double cimag(double complex)
    double complex conj(double complex)

cnp.import_array()

BACKEND_NAME = "cython"


cdef inline void _evolve_one(const double complex[:, ::1] U,
                             const double complex[:, ::1] M,
                             const double complex[:, ::1] rates,
                             double t,
                             double complex* out) noexcept nogil:
    # out (row-major 4x4) = herm(U (M * exp(rates t)) U^dag)
    cdef double complex X[16]
    cdef double complex Y[16]
    cdef double complex acc, a, b
    cdef int i, j, k
    for i in range(4):
        for j in range(4):
            if i == j:
                X[4 * i + j] = M[i, j]
            else:
                X[4 * i + j] = M[i, j] * cexp(rates[i, j] * t)
    for i in range(4):
        for j in range(4):
            acc = 0
            for k in range(4):
                acc = acc + U[i, k] * X[4 * k + j]
            Y[4 * i + j] = acc
    for i in range(4):
        for j in range(4):
            acc = 0
            for k in range(4):
                acc = acc + Y[4 * i + k] * conj(U[j, k])
            out[4 * i + j] = acc
    for i in range(4):
        out[5 * i] = creal(out[5 * i])
        for j in range(i + 1, 4):
            a = out[4 * i + j]
            b = out[4 * j + i]
            acc = 0.5 * (a + conj(b))
            out[4 * i + j] = acc
            out[4 * j + i] = conj(acc)


cdef inline double complex _det4(const double complex* src) noexcept nogil:
    # partial-pivot Gaussian elimination on a private copy
    cdef double complex A[16]
    cdef double complex det = 1, piv, f, tmp
    cdef int i, j, k, p
    cdef double best, mag
    for i in range(16):
        A[i] = src[i]
    for k in range(4):
        p = k
        best = cabs(A[4 * k + k])
        for i in range(k + 1, 4):
            mag = cabs(A[4 * i + k])
            if mag > best:
                best = mag
                p = i
        if best == 0.0:
            return 0
        if p != k:
            for j in range(4):
                tmp = A[4 * k + j]
                A[4 * k + j] = A[4 * p + j]
                A[4 * p + j] = tmp
            det = -det
        piv = A[4 * k + k]
        det = det * piv
        for i in range(k + 1, 4):
            f = A[4 * i + k] / piv
            for j in range(k + 1, 4):
                A[4 * i + j] = A[4 * i + j] - f * A[4 * k + j]
    return det


cdef inline void _invariants_one(const double complex* S, double* row) noexcept nogil:
    cdef double complex dab, dS
    row[0] = creal(S[0])
    row[1] = creal(S[10])
    row[2] = creal(S[0] * S[5] - S[1] * S[4])
    row[3] = creal(S[10] * S[15] - S[11] * S[14])
    dab = S[2] * S[7] - S[3] * S[6]
    row[4] = creal(dab)
    row[5] = cimag(dab)
    dS = _det4(S)
    row[6] = creal(dS)
    row[7] = cimag(dS)


def evolve_batch(U, M, rates, times):
    """Covariance stack ``(n, 4, 4)`` at each time in ``times``."""
    cdef const double complex[:, ::1] Uv = np.ascontiguousarray(U, dtype=np.complex128)
    cdef const double complex[:, ::1] Mv = np.ascontiguousarray(M, dtype=np.complex128)
    cdef const double complex[:, ::1] Rv = np.ascontiguousarray(rates, dtype=np.complex128)
    cdef const double[::1] tv = np.ascontiguousarray(times, dtype=np.float64)
    cdef Py_ssize_t n = tv.shape[0], q
    out = np.empty((n, 4, 4), dtype=np.complex128)
    cdef double complex[:, :, ::1] ov = out
    with nogil:
        for q in range(n):
            _evolve_one(Uv, Mv, Rv, tv[q], &ov[q, 0, 0])
    return out


def invariants_batch(sigmas):
    """Per-matrix invariants, shape ``(n, 8)``; column order in ``_fallback``."""
    cdef const double complex[:, :, ::1] sv = np.ascontiguousarray(sigmas, dtype=np.complex128)
    cdef Py_ssize_t n = sv.shape[0], q
    out = np.empty((n, 8), dtype=np.float64)
    cdef double[:, ::1] ov = out
    with nogil:
        for q in range(n):
            _invariants_one(&sv[q, 0, 0], &ov[q, 0])
    return out


def trajectory_invariants(U, M, rates, times):
    """Fused ``invariants_batch(evolve_batch(...))`` without the covariance stack."""
    cdef const double complex[:, ::1] Uv = np.ascontiguousarray(U, dtype=np.complex128)
    cdef const double complex[:, ::1] Mv = np.ascontiguousarray(M, dtype=np.complex128)
    cdef const double complex[:, ::1] Rv = np.ascontiguousarray(rates, dtype=np.complex128)
    cdef const double[::1] tv = np.ascontiguousarray(times, dtype=np.float64)
    cdef Py_ssize_t n = tv.shape[0], q
    cdef double complex S[16]
    out = np.empty((n, 8), dtype=np.float64)
    cdef double[:, ::1] ov = out
    with nogil:
        for q in range(n):
            _evolve_one(Uv, Mv, Rv, tv[q], S)
            _invariants_one(S, &ov[q, 0])
    return out
