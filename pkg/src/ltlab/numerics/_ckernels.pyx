# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled dense kernels: Householder tridiagonalization, implicit QL and
Bunch-Kaufman factorization/solve.

Signatures and semantics match ``_pykernels``.  Arrays are C-contiguous
float64; the C lower triangle is the Fortran upper triangle, which is why
the BLAS calls below pass uplo='U'.
"""
from libc.math cimport fabs, sqrt, hypot, copysign
from scipy.linalg.cython_blas cimport dsymv, dsyr2, dsyr, ddot

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef double BK_ALPHA = (1.0 + sqrt(17.0)) / 8.0


def householder_tridiagonal(double[:, ::1] a, double[::1] d, double[::1] e,
                            double[::1] taus):
    cdef int n = a.shape[0]
    cdef int i, j, m, one = 1
    cdef double alpha, xnorm, beta, tau, scal, alpha2, mone = -1.0, zero = 0.0
    cdef char uplo = b'U'
    cdef double[::1] v = np.empty(max(n, 1))
    cdef double[::1] w = np.empty(max(n, 1))
    for i in range(n - 1):
        alpha = a[i + 1, i]
        xnorm = 0.0
        for j in range(i + 2, n):
            xnorm += a[j, i] * a[j, i]
        xnorm = sqrt(xnorm)
        if xnorm == 0.0:
            tau = 0.0
            beta = alpha
        else:
            beta = -copysign(hypot(alpha, xnorm), alpha)
            tau = (beta - alpha) / beta
            scal = 1.0 / (alpha - beta)
            for j in range(i + 2, n):
                a[j, i] *= scal
        e[i] = beta
        taus[i] = tau
        if tau != 0.0:
            m = n - i - 1
            v[0] = 1.0
            for j in range(1, m):
                v[j] = a[i + 1 + j, i]
            dsymv(&uplo, &m, &tau, &a[i + 1, i + 1], &n, &v[0], &one,
                  &zero, &w[0], &one)
            alpha2 = -0.5 * tau * ddot(&m, &w[0], &one, &v[0], &one)
            for j in range(m):
                w[j] += alpha2 * v[j]
            dsyr2(&uplo, &m, &mone, &v[0], &one, &w[0], &one,
                  &a[i + 1, i + 1], &n)
        d[i] = a[i, i]
    if n > 0:
        d[n - 1] = a[n - 1, n - 1]


def tql_implicit(double[::1] d, double[::1] e, double[:, ::1] z):
    cdef int n = d.shape[0]
    cdef int r = z.shape[0]
    cdef int l, m, i, k, it
    cdef double dd, g, rr, s, c, p, f, b, zi, zi1
    cdef double eps = 2.220446049250313e-16
    cdef double floor = 0.0
    cdef bint underflow
    if n == 0:
        return 0
    e[n - 1] = 0.0
    # graded matrices: also deflate couplings negligible against the norm
    for i in range(n):
        floor = max(floor, fabs(d[i]) + fabs(e[i]))
    floor *= eps
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = fabs(d[m]) + fabs(d[m + 1])
                if fabs(e[m]) <= eps * dd or fabs(e[m]) <= floor:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > 60:
                return l + 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            rr = hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + copysign(rr, g))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                rr = hypot(f, g)
                e[i + 1] = rr
                if rr == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / rr
                c = g / rr
                g = d[i + 1] - p
                rr = (d[i] - g) * s + 2.0 * c * b
                p = s * rr
                d[i + 1] = g + p
                g = c * rr - b
                for k in range(r):
                    zi = z[k, i]
                    zi1 = z[k, i + 1]
                    z[k, i] = c * zi - s * zi1
                    z[k, i + 1] = s * zi + c * zi1
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return 0


def bk_factor(double[:, ::1] a, long[::1] ipiv):
    cdef int n = a.shape[0]
    cdef int info = 0, k = 0, kstep, imax, kp, kk, i, j, m, one = 1
    cdef double absakk, colmax, rowmax, t, r1, mr1, d11, d21, d22, wk, wkp1
    cdef char uplo = b'U'
    cdef double[::1] x = np.empty(max(n, 1))
    while k < n:
        kstep = 1
        absakk = fabs(a[k, k])
        imax = k
        colmax = 0.0
        for i in range(k + 1, n):
            if fabs(a[i, k]) > colmax:
                colmax = fabs(a[i, k])
                imax = i
        if absakk == 0.0 and colmax == 0.0:
            if info == 0:
                info = k + 1
            kp = k
        else:
            if absakk >= BK_ALPHA * colmax:
                kp = k
            else:
                rowmax = 0.0
                for j in range(k, imax):
                    if fabs(a[imax, j]) > rowmax:
                        rowmax = fabs(a[imax, j])
                for i in range(imax + 1, n):
                    if fabs(a[i, imax]) > rowmax:
                        rowmax = fabs(a[i, imax])
                if absakk >= BK_ALPHA * colmax * (colmax / rowmax):
                    kp = k
                elif fabs(a[imax, imax]) >= BK_ALPHA * rowmax:
                    kp = imax
                else:
                    kp = imax
                    kstep = 2
            kk = k + kstep - 1
            if kp != kk:
                for i in range(kp + 1, n):
                    t = a[i, kk]
                    a[i, kk] = a[i, kp]
                    a[i, kp] = t
                for j in range(kk + 1, kp):
                    t = a[j, kk]
                    a[j, kk] = a[kp, j]
                    a[kp, j] = t
                t = a[kk, kk]
                a[kk, kk] = a[kp, kp]
                a[kp, kp] = t
                if kstep == 2:
                    t = a[k + 1, k]
                    a[k + 1, k] = a[kp, k]
                    a[kp, k] = t
            if kstep == 1:
                if k < n - 1:
                    r1 = 1.0 / a[k, k]
                    mr1 = -r1
                    m = n - k - 1
                    for i in range(m):
                        x[i] = a[k + 1 + i, k]
                    dsyr(&uplo, &m, &mr1, &x[0], &one, &a[k + 1, k + 1], &n)
                    for i in range(k + 1, n):
                        a[i, k] *= r1
            else:
                if k < n - 2:
                    d21 = a[k + 1, k]
                    d11 = a[k + 1, k + 1] / d21
                    d22 = a[k, k] / d21
                    t = 1.0 / (d11 * d22 - 1.0)
                    d21 = t / d21
                    for j in range(k + 2, n):
                        wk = d21 * (d11 * a[j, k] - a[j, k + 1])
                        wkp1 = d21 * (d22 * a[j, k + 1] - a[j, k])
                        for i in range(j, n):
                            a[i, j] -= a[i, k] * wk + a[i, k + 1] * wkp1
                        a[j, k] = wk
                        a[j, k + 1] = wkp1
        if kstep == 1:
            ipiv[k] = kp
        else:
            ipiv[k] = -(kp + 1)
            ipiv[k + 1] = -(kp + 1)
        k += kstep
    return info


cdef inline void _swap_rows(double[:, ::1] b, int i, int j) nogil:
    cdef int c
    cdef double t
    for c in range(b.shape[1]):
        t = b[i, c]
        b[i, c] = b[j, c]
        b[j, c] = t


def bk_solve(double[:, ::1] a, long[::1] ipiv, double[:, ::1] b):
    cdef int n = a.shape[0]
    cdef int nrhs = b.shape[1]
    cdef int k, kp, i, c
    cdef double akm1k, akm1, ak, denom, bkm1, bk, lik, lik1, piv, acc, acc1
    k = 0
    while k < n:
        if ipiv[k] >= 0:
            kp = ipiv[k]
            if kp != k:
                _swap_rows(b, k, kp)
            for i in range(k + 1, n):
                lik = a[i, k]
                if lik != 0.0:
                    for c in range(nrhs):
                        b[i, c] -= lik * b[k, c]
            piv = a[k, k]
            for c in range(nrhs):
                b[k, c] /= piv
            k += 1
        else:
            kp = -ipiv[k] - 1
            if kp != k + 1:
                _swap_rows(b, k + 1, kp)
            for i in range(k + 2, n):
                lik = a[i, k]
                lik1 = a[i, k + 1]
                for c in range(nrhs):
                    b[i, c] -= lik * b[k, c] + lik1 * b[k + 1, c]
            akm1k = a[k + 1, k]
            akm1 = a[k, k] / akm1k
            ak = a[k + 1, k + 1] / akm1k
            denom = akm1 * ak - 1.0
            for c in range(nrhs):
                bkm1 = b[k, c] / akm1k
                bk = b[k + 1, c] / akm1k
                b[k, c] = (ak * bkm1 - bk) / denom
                b[k + 1, c] = (akm1 * bk - bkm1) / denom
            k += 2
    k = n - 1
    while k >= 0:
        if ipiv[k] >= 0:
            for i in range(k + 1, n):
                lik = a[i, k]
                if lik != 0.0:
                    for c in range(nrhs):
                        b[k, c] -= lik * b[i, c]
            kp = ipiv[k]
            if kp != k:
                _swap_rows(b, k, kp)
            k -= 1
        else:
            for i in range(k + 1, n):
                lik = a[i, k]
                lik1 = a[i, k - 1]
                for c in range(nrhs):
                    b[k, c] -= lik * b[i, c]
                    b[k - 1, c] -= lik1 * b[i, c]
            kp = -ipiv[k] - 1
            if kp != k:
                _swap_rows(b, k, kp)
            k -= 2
