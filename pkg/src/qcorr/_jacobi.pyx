# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: cyclic Jacobi for small Hermitian matrices and the
batched sphere objectives used by the nonlocality oracles.

Mirrors ``_jacobi_py`` line for line; the two must stay in sync.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs

cnp.import_array()

cdef extern from "complex.h" nogil:
    double cabs(double complex)
    double complex conj(double complex)
    double creal(double complex)

cdef enum:
    MAX_SWEEPS = 64


cdef int _jacobi(double complex[:, ::1] a, double complex[:, ::1] v,
                 int n, bint want_v, double rel_tol) noexcept nogil:
    cdef int p, q, k, sweep
    cdef double fro = 0.0, off, g, tau, t, c, s, app, aqq
    cdef double complex ph, akp, akq, apk, aqk

    for p in range(n):
        for q in range(n):
            fro += creal(a[p, q] * conj(a[p, q]))
    fro = sqrt(fro)
    if fro == 0.0:
        return 0

    for sweep in range(MAX_SWEEPS):
        off = 0.0
        for p in range(n):
            for q in range(n):
                if p != q:
                    off += creal(a[p, q] * conj(a[p, q]))
        if sqrt(off) < rel_tol * fro:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = cabs(a[p, q])
                if g < 1e-300:
                    continue
                ph = a[p, q] / g
                app = creal(a[p, p])
                aqq = creal(a[q, q])
                tau = (aqq - app) / (2.0 * g)
                if tau >= 0.0:
                    t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                # A <- A U with U_pp = U_qq = c, U_pq = s ph, U_qp = -s conj(ph)
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * conj(ph) * akq
                    a[k, q] = s * ph * akp + c * akq
                # A <- U^H A
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * ph * aqk
                    a[q, k] = s * conj(ph) * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = creal(a[p, p])
                a[q, q] = creal(a[q, q])
                if want_v:
                    for k in range(n):
                        akp = v[k, p]
                        akq = v[k, q]
                        v[k, p] = c * akp - s * conj(ph) * akq
                        v[k, q] = s * ph * akp + c * akq
    return -1


def jacobi_eigh(a, bint vectors=True, double rel_tol=1e-14):
    """Raw Jacobi diagonalization; returns (diag, V, sweeps), unsorted."""
    cdef double complex[:, ::1] work = np.array(a, dtype=np.complex128, order="C", copy=True)
    cdef int n = work.shape[0]
    cdef double complex[:, ::1] v = np.eye(n, dtype=np.complex128)
    cdef int sweeps
    with nogil:
        sweeps = _jacobi(work, v, n, vectors, rel_tol)
    w = np.empty(n, dtype=np.float64)
    cdef int i
    for i in range(n):
        w[i] = creal(work[i, i])
    return w, np.asarray(v), sweeps


cdef void _pauli_a(double nx, double ny, double nz, double complex[:, ::1] k) noexcept nogil:
    # (n . sigma) (x) 1 in the |ab> basis, a = first index
    cdef int i, j
    for i in range(4):
        for j in range(4):
            k[i, j] = 0.0
    k[0, 0] = nz
    k[1, 1] = nz
    k[2, 2] = -nz
    k[3, 3] = -nz
    k[0, 2] = nx - 1j * ny
    k[1, 3] = nx - 1j * ny
    k[2, 0] = nx + 1j * ny
    k[3, 1] = nx + 1j * ny


cdef void _matmul4(double complex[:, ::1] x, double complex[:, ::1] y,
                   double complex[:, ::1] out) noexcept nogil:
    cdef int i, j, l
    cdef double complex acc
    for i in range(4):
        for j in range(4):
            acc = 0.0
            for l in range(4):
                acc = acc + x[i, l] * y[l, j]
            out[i, j] = acc


def tmin_objective(rho, dirs):
    """Trace norm of rho - Pi_n(rho) for each unit direction n (rows of dirs)."""
    cdef double complex[:, ::1] r = np.ascontiguousarray(rho, dtype=np.complex128)
    cdef double[:, ::1] d = np.ascontiguousarray(dirs, dtype=np.float64)
    cdef Py_ssize_t m = d.shape[0], idx
    out_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double complex[:, ::1] k = np.zeros((4, 4), dtype=np.complex128)
    cdef double complex[:, ::1] t1 = np.zeros((4, 4), dtype=np.complex128)
    cdef double complex[:, ::1] t2 = np.zeros((4, 4), dtype=np.complex128)
    cdef double complex[:, ::1] v = np.zeros((1, 1), dtype=np.complex128)
    cdef int i, j
    cdef double acc
    with nogil:
        for idx in range(m):
            _pauli_a(d[idx, 0], d[idx, 1], d[idx, 2], k)
            _matmul4(k, r, t1)
            _matmul4(t1, k, t2)
            # rho - Pi(rho) = (rho - K rho K) / 2
            for i in range(4):
                for j in range(4):
                    t2[i, j] = 0.5 * (r[i, j] - t2[i, j])
            _jacobi(t2, v, 4, False, 1e-14)
            acc = 0.0
            for i in range(4):
                acc += fabs(creal(t2[i, i]))
            out[idx] = acc
    return out_arr


def skew_objective(sqrt_rho, dirs):
    """Skew information of rho w.r.t. (n . sigma) (x) 1 for each direction n."""
    cdef double complex[:, ::1] q = np.ascontiguousarray(sqrt_rho, dtype=np.complex128)
    cdef double[:, ::1] d = np.ascontiguousarray(dirs, dtype=np.float64)
    cdef Py_ssize_t m = d.shape[0], idx
    out_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double complex[:, ::1] k = np.zeros((4, 4), dtype=np.complex128)
    cdef double complex[:, ::1] qk = np.zeros((4, 4), dtype=np.complex128)
    cdef double complex[:, ::1] qq = np.zeros((4, 4), dtype=np.complex128)
    cdef double complex[:, ::1] kk = np.zeros((4, 4), dtype=np.complex128)
    cdef int i, j
    cdef double complex t_rkk, t_qkqk
    _matmul4(q, q, qq)
    with nogil:
        for idx in range(m):
            _pauli_a(d[idx, 0], d[idx, 1], d[idx, 2], k)
            _matmul4(q, k, qk)
            _matmul4(k, k, kk)
            t_rkk = 0.0
            t_qkqk = 0.0
            for i in range(4):
                for j in range(4):
                    t_rkk = t_rkk + qq[i, j] * kk[j, i]
                    t_qkqk = t_qkqk + qk[i, j] * qk[j, i]
            out[idx] = creal(t_rkk - t_qkqk)
    return out_arr
