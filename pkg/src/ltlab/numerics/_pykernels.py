"""Pure-Python/numpy implementations of the dense kernels.

These mirror ``_ckernels.pyx`` one-to-one and are selected when the compiled
extension is unavailable or ``LTLAB_PURE_PYTHON=1`` is set.  All routines
work in place on float64 arrays and read only the lower triangle of
symmetric input.
"""
import math

import numpy as np

BK_ALPHA = (1.0 + math.sqrt(17.0)) / 8.0


def householder_tridiagonal(a, d, e, taus):
    """Reduce the symmetric matrix ``a`` (lower triangle) to tridiagonal form.

    On exit ``d`` holds the diagonal, ``e`` the sub-diagonal and ``taus`` the
    reflector scalars; the reflector vectors are left in ``a[i+2:, i]`` with
    an implicit unit leading entry.
    """
    n = a.shape[0]
    # keep a full symmetric copy of the trailing block for the numpy updates
    il = np.tril_indices(n, -1)
    a[il[1], il[0]] = a[il]
    for i in range(n - 1):
        alpha = a[i + 1, i]
        x = a[i + 2:, i]
        xnorm = math.sqrt(float(np.dot(x, x))) if x.size else 0.0
        if xnorm == 0.0:
            tau = 0.0
            beta = alpha
        else:
            beta = -math.copysign(math.hypot(alpha, xnorm), alpha)
            tau = (beta - alpha) / beta
            x *= 1.0 / (alpha - beta)
        e[i] = beta
        taus[i] = tau
        if tau != 0.0:
            v = np.empty(n - i - 1)
            v[0] = 1.0
            v[1:] = x
            sub = a[i + 1:, i + 1:]
            w = tau * (sub @ v)
            w += (-0.5 * tau * float(np.dot(w, v))) * v
            sub -= np.outer(v, w)
            sub -= np.outer(w, v)
        d[i] = a[i, i]
    d[n - 1] = a[n - 1, n - 1]


def tql_implicit(d, e, z):
    """Implicit QL iteration on a symmetric tridiagonal matrix.

    ``d`` (length n) is overwritten by the eigenvalues in no particular order.
    ``e`` (length n) holds the sub-diagonal in ``e[:n-1]`` and is destroyed.
    ``z`` is an (r, n) array whose columns are rotated along with the
    iteration (pass an empty (0, n) array to skip vectors).

    Returns 0 on success or the index of the eigenvalue that failed to
    converge within 60 iterations.
    """
    n = d.shape[0]
    r = z.shape[0]
    if n == 0:
        return 0
    e[n - 1] = 0.0
    eps = 2.220446049250313e-16
    # graded matrices: also deflate couplings negligible against the norm
    floor = eps * float(np.max(np.abs(d) + np.abs(e)))
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd or abs(e[m]) <= floor:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > 60:
                return l + 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            rr = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(rr, g))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                rr = math.hypot(f, g)
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
                if r:
                    zi = z[:, i].copy()
                    zi1 = z[:, i + 1]
                    z[:, i] = c * zi - s * zi1
                    z[:, i + 1] = s * zi + c * zi1
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return 0


def bk_factor(a, ipiv):
    """Bunch-Kaufman factorization P A P^T = L D L^T, lower storage, in place.

    ``ipiv[k] >= 0`` marks a 1x1 pivot with rows k and ipiv[k] interchanged;
    ``ipiv[k] = ipiv[k+1] = -(p+1)`` marks a 2x2 pivot with rows k+1 and p
    interchanged.  Returns 0, or ``k+1`` if column k was exactly zero.
    """
    n = a.shape[0]
    info = 0
    k = 0
    while k < n:
        kstep = 1
        absakk = abs(a[k, k])
        if k < n - 1:
            col = np.abs(a[k + 1:, k])
            imax = k + 1 + int(np.argmax(col))
            colmax = col[imax - k - 1]
        else:
            imax = k
            colmax = 0.0
        if max(absakk, colmax) == 0.0:
            if info == 0:
                info = k + 1
            kp = k
        else:
            if absakk >= BK_ALPHA * colmax:
                kp = k
            else:
                rowmax = float(np.max(np.abs(a[imax, k:imax])))
                if imax < n - 1:
                    rowmax = max(rowmax, float(np.max(np.abs(a[imax + 1:, imax]))))
                if absakk >= BK_ALPHA * colmax * (colmax / rowmax):
                    kp = k
                elif abs(a[imax, imax]) >= BK_ALPHA * rowmax:
                    kp = imax
                else:
                    kp = imax
                    kstep = 2
            kk = k + kstep - 1
            if kp != kk:
                if kp < n - 1:
                    tmp = a[kp + 1:, kk].copy()
                    a[kp + 1:, kk] = a[kp + 1:, kp]
                    a[kp + 1:, kp] = tmp
                tmp = a[kk + 1:kp, kk].copy()
                a[kk + 1:kp, kk] = a[kp, kk + 1:kp]
                a[kp, kk + 1:kp] = tmp
                a[kk, kk], a[kp, kp] = a[kp, kp], a[kk, kk]
                if kstep == 2:
                    a[k + 1, k], a[kp, k] = a[kp, k], a[k + 1, k]
            if kstep == 1:
                if k < n - 1:
                    r1 = 1.0 / a[k, k]
                    x = a[k + 1:, k]
                    sub = a[k + 1:, k + 1:]
                    sub -= r1 * np.outer(x, x)
                    x *= r1
            else:
                if k < n - 2:
                    d21 = a[k + 1, k]
                    d11 = a[k + 1, k + 1] / d21
                    d22 = a[k, k] / d21
                    t = 1.0 / (d11 * d22 - 1.0)
                    d21 = t / d21
                    ak = a[k + 2:, k].copy()
                    ak1 = a[k + 2:, k + 1].copy()
                    wk = d21 * (d11 * ak - ak1)
                    wkp1 = d21 * (d22 * ak1 - ak)
                    sub = a[k + 2:, k + 2:]
                    sub -= np.outer(ak, wk) + np.outer(ak1, wkp1)
                    a[k + 2:, k] = wk
                    a[k + 2:, k + 1] = wkp1
        if kstep == 1:
            ipiv[k] = kp
        else:
            ipiv[k] = -(kp + 1)
            ipiv[k + 1] = -(kp + 1)
        k += kstep
    return info


def bk_solve(a, ipiv, b):
    """Solve A X = B in place on the (n, nrhs) array ``b`` using bk_factor output."""
    n = a.shape[0]
    k = 0
    while k < n:
        if ipiv[k] >= 0:
            kp = ipiv[k]
            if kp != k:
                b[[k, kp]] = b[[kp, k]]
            if k < n - 1:
                b[k + 1:] -= np.outer(a[k + 1:, k], b[k])
            b[k] /= a[k, k]
            k += 1
        else:
            kp = -ipiv[k] - 1
            if kp != k + 1:
                b[[k + 1, kp]] = b[[kp, k + 1]]
            if k < n - 2:
                b[k + 2:] -= np.outer(a[k + 2:, k], b[k])
                b[k + 2:] -= np.outer(a[k + 2:, k + 1], b[k + 1])
            akm1k = a[k + 1, k]
            akm1 = a[k, k] / akm1k
            ak = a[k + 1, k + 1] / akm1k
            denom = akm1 * ak - 1.0
            bkm1 = b[k] / akm1k
            bk = b[k + 1] / akm1k
            b[k] = (ak * bkm1 - bk) / denom
            b[k + 1] = (akm1 * bk - bkm1) / denom
            k += 2
    k = n - 1
    while k >= 0:
        if ipiv[k] >= 0:
            if k < n - 1:
                b[k] -= a[k + 1:, k] @ b[k + 1:]
            kp = ipiv[k]
            if kp != k:
                b[[k, kp]] = b[[kp, k]]
            k -= 1
        else:
            if k < n - 1:
                b[k] -= a[k + 1:, k] @ b[k + 1:]
                b[k - 1] -= a[k + 1:, k - 1] @ b[k + 1:]
            kp = -ipiv[k] - 1
            if kp != k:
                b[[k, kp]] = b[[kp, k]]
            k -= 2
