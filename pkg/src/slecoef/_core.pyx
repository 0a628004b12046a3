# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: double-precision eta-form fill and path integration.

Mirrors :mod:`slecoef._pycore` operation by operation.
"""

import numpy as np

from libc.math cimport cos, sin

from slecoef.errors import EtaRangeError, SingularPivotError


cdef inline double _eta(const double[::1] eta, long d) noexcept nogil:
    if d < 0:
        d = -d
    return eta[d]


cdef double _coef(const double[::1] eta, long i, long j, int n, int k,
                  double q, bint exterior) noexcept nogil:
    cdef long d = i - j
    if not exterior:
        if n == 0:
            if k == 0:
                return -_eta(eta, d) - i - j + 2
            if k == 1:
                return 2 * (_eta(eta, d + 1) + i - 1 - q)
            return -_eta(eta, d + 2) + j - i - 2 + q
        if n == 1:
            if k == 0:
                return 2 * (_eta(eta, d - 1) + j - 1 - q)
            if k == 1:
                return -4 * (_eta(eta, d) - 2 * q)
            return 2 * (_eta(eta, d + 1) + 3 - j - 2 * q)
        if k == 0:
            return -_eta(eta, d - 2) + i - j - 2 + q
        if k == 1:
            return 2 * (_eta(eta, d - 1) + 3 - i - 2 * q)
        return -_eta(eta, d) + i + j - 6 + 2 * q
    if n == 0:
        if k == 0:
            return -(_eta(eta, d) + i + j + 2)
        if k == 1:
            return 2 * (_eta(eta, d + 1) + i + 1)
        return -(_eta(eta, d + 2) + i - j + 2 + q)
    if n == 1:
        if k == 0:
            return 2 * (_eta(eta, d - 1) + j + 1)
        if k == 1:
            return -4 * _eta(eta, d)
        return 2 * (_eta(eta, d + 1) - j + 1 + q)
    if k == 0:
        return -(_eta(eta, d - 2) + j - i + 2 + q)
    if k == 1:
        return 2 * (_eta(eta, d - 1) - i + 1 + q)
    return -(_eta(eta, d) - i - j + 2 + 2 * q)


def fill_eta_double(eta, double q, bint exterior, long nmax):
    cdef const double[::1] E = np.ascontiguousarray(eta, dtype=np.float64)
    cdef long lo = -1 if exterior else 1
    cdef long size = nmax - lo + 1
    if E.shape[0] < size:
        raise EtaRangeError(nmax - lo, E.shape[0] - 1)
    out = np.zeros((size, size), dtype=np.float64)
    cdef double[:, ::1] S = out
    cdef long i, j, ii, jj, bad_i = 0, bad_j = 0
    cdef int n, k
    cdef double acc, v, piv
    cdef bint singular = False
    with nogil:
        for i in range(lo, nmax + 1):
            if i == 0:
                continue
            for j in range(lo, nmax + 1):
                if j == 0:
                    continue
                if i == lo and j == lo:
                    S[0, 0] = 1.0
                    continue
                acc = 0.0
                for n in range(3):
                    ii = i - n
                    if ii < lo:
                        break
                    for k in range(3):
                        if n == 0 and k == 0:
                            continue
                        jj = j - k
                        if jj < lo:
                            break
                        v = S[ii - lo, jj - lo]
                        if v != 0.0:
                            acc = acc + _coef(E, i, j, n, k, q, exterior) * v
                piv = _coef(E, i, j, 0, 0, q, exterior)
                if piv == 0.0:
                    singular = True
                    bad_i = i
                    bad_j = j
                    break
                S[i - lo, j - lo] = -acc / piv
            if singular:
                break
    if singular:
        raise SingularPivotError((bad_i, bad_j))
    return lo, out


def integrate_paths(increments, long nmax, double dt, double blowup):
    cdef const double[:, ::1] inc = np.ascontiguousarray(increments, dtype=np.float64)
    cdef Py_ssize_t paths = inc.shape[0], steps = inc.shape[1]
    u_out = np.zeros((paths, nmax + 1), dtype=np.complex128)
    theta_out = np.zeros(paths, dtype=np.float64)
    blown_out = np.zeros(paths, dtype=np.uint8)
    cdef double complex[:, ::1] U = u_out
    cdef double[::1] TH = theta_out
    cdef unsigned char[::1] BL = blown_out
    cdef double complex[::1] zp = np.zeros(max(nmax, 1), dtype=np.complex128)
    cdef double complex[::1] new = np.zeros(nmax + 1, dtype=np.complex128)
    cdef double complex z, acc, x
    cdef double theta, limit = blowup * blowup, mag
    cdef Py_ssize_t p, t
    cdef long m, k
    with nogil:
        for p in range(paths):
            if nmax >= 1:
                U[p, 1] = 1.0
            theta = 0.0
            for t in range(steps):
                z = cos(theta) - 1j * sin(theta)
                if nmax >= 2:
                    zp[1] = z
                    for k in range(2, nmax):
                        zp[k] = zp[k - 1] * z
                for m in range(2, nmax + 1):
                    acc = (1 - m) * U[p, m]
                    for k in range(1, m):
                        acc = acc - (2 * (m - k)) * (U[p, m - k] * zp[k])
                    new[m] = U[p, m] + dt * acc
                for m in range(2, nmax + 1):
                    U[p, m] = new[m]
                theta = theta + inc[p, t]
                mag = 0.0
                for m in range(2, nmax + 1):
                    x = U[p, m]
                    if not (x.real * x.real + x.imag * x.imag <= limit):
                        mag = 1.0
                if mag != 0.0:
                    BL[p] = 1
                    break
            TH[p] = theta
    return u_out, theta_out, blown_out
