"""Symmetric indefinite LDL^T factorization and inertia counting.

Dense matrices use Bunch-Kaufman pivoting directly. Sparse matrices are
treated as block tridiagonal and reduced by the Schur-complement recursion

    S_0 = A_00 - sigma I,
    S_{i+1} = A_{i+1,i+1} - sigma I - B_i S_i^{-1} B_i^T,

so that by Haynsworth additivity the inertia of ``A - sigma I`` is the sum
of the inertias of the ``S_i``.
"""
import numpy as np

from ..errors import DataError, PivotError
from . import _backend
from .matrix import SymmetricMatrix

__all__ = ["LDLFactor", "factor_ldl", "inertia_below", "bk_inertia"]


def bk_inertia(a, ipiv):
    """(negative, zero, positive) counts of the block-diagonal factor D."""
    n = a.shape[0]
    neg = zero = pos = 0
    k = 0
    while k < n:
        if ipiv[k] >= 0:
            dk = a[k, k]
            if dk < 0:
                neg += 1
            elif dk > 0:
                pos += 1
            else:
                zero += 1
            k += 1
        else:
            a11, a21, a22 = a[k, k], a[k + 1, k], a[k + 1, k + 1]
            det = a11 * a22 - a21 * a21
            if det < 0:
                neg += 1
                pos += 1
            elif det > 0:
                if a11 + a22 < 0:
                    neg += 2
                else:
                    pos += 2
            else:
                zero += 1
                if a11 + a22 < 0:
                    neg += 1
                else:
                    pos += 1
            k += 2
    return neg, zero, pos


def _bk(s, kernels):
    s = np.ascontiguousarray(s, dtype=float)
    ipiv = np.zeros(s.shape[0], dtype=np.int64)
    info = kernels.bk_factor(s, ipiv)
    if info:
        raise PivotError(
            f"exactly singular pivot in column {info - 1}; "
            "perturb the shift and count again"
        )
    return s, ipiv


def _bk_solve(s, ipiv, b, kernels):
    b = np.array(b, dtype=float, order="C", copy=True)
    vec = b.ndim == 1
    if vec:
        b = b[:, None].copy()
    kernels.bk_solve(s, ipiv, b)
    return b[:, 0] if vec else b


class LDLFactor:
    """Factorization of ``A - sigma*I``.

    Attributes
    ----------
    sigma : float
        The shift.
    inertia : tuple of int
        (negative, zero, positive) eigenvalue counts of ``A - sigma*I``.
    """

    def __init__(self, sigma, inertia, solver):
        self.sigma = float(sigma)
        self.inertia = inertia
        self._solver = solver

    @property
    def negative(self):
        return self.inertia[0]

    def solve(self, b):
        """Solve ``(A - sigma I) x = b`` for a vector or column stack ``b``."""
        if self._solver is None:
            raise DataError("factor was built without keeping the factors")
        return self._solver(b)


def _factor_dense(a, sigma, kernels, keep):
    n = a.shape[0]
    s = np.array(a, dtype=float, order="C", copy=True)
    s[np.diag_indices(n)] -= sigma
    s, ipiv = _bk(s, kernels)
    inertia = bk_inertia(s, ipiv)
    solver = (lambda b: _bk_solve(s, ipiv, b, kernels)) if keep else None
    return LDLFactor(sigma, inertia, solver)


def _factor_blocks(A, sigma, kernels, keep):
    full = A.full()
    n = A.n
    b = A.block_size
    edges = list(range(0, n, b)) + [n]
    nb = len(edges) - 1
    neg = zero = pos = 0
    sinvs = []
    offs = []
    s_inv = None
    for i in range(nb):
        lo, hi = edges[i], edges[i + 1]
        s = full[lo:hi, lo:hi].toarray()
        s[np.diag_indices(hi - lo)] -= sigma
        if i > 0:
            # off-diagonal blocks stay sparse; for stencils they are diagonal
            bi = full[lo:hi, edges[i - 1]:lo]
            t = np.asarray(bi @ s_inv)
            s -= np.asarray(bi @ t.T).T
            if keep:
                offs.append(bi)
        s = 0.5 * (s + s.T)
        f, ipiv = _bk(s, kernels)
        ni, zi, pi = bk_inertia(f, ipiv)
        neg += ni
        zero += zi
        pos += pi
        s_inv = _bk_solve(f, ipiv, np.eye(hi - lo), kernels)
        s_inv = 0.5 * (s_inv + s_inv.T)
        if keep:
            sinvs.append(s_inv)

    def solve(rhs):
        rhs = np.asarray(rhs, dtype=float)
        y = [rhs[edges[i]:edges[i + 1]].copy() for i in range(nb)]
        for i in range(nb - 1):
            y[i + 1] -= offs[i] @ (sinvs[i] @ y[i])
        x = [None] * nb
        x[nb - 1] = sinvs[nb - 1] @ y[nb - 1]
        for i in range(nb - 2, -1, -1):
            x[i] = sinvs[i] @ (y[i] - offs[i].T @ x[i + 1])
        return np.concatenate(x, axis=0)

    return LDLFactor(sigma, (neg, zero, pos), solve if keep else None)


def factor_ldl(A, sigma=0.0, keep=True, kernels=None):
    """Factor ``A - sigma*I`` and report its inertia.

    Parameters
    ----------
    A : SymmetricMatrix or array_like
    sigma : float
    keep : bool
        Keep the factors so that :meth:`LDLFactor.solve` works.

    Raises
    ------
    PivotError
        If a pivot is exactly zero, i.e. ``sigma`` is numerically an
        eigenvalue.
    """
    k = kernels or _backend.kernels
    if isinstance(A, SymmetricMatrix):
        if A.is_sparse:
            return _factor_blocks(A, sigma, k, keep)
        return _factor_dense(A.full(), sigma, k, keep)
    a = np.asarray(A, dtype=float)
    if not np.all(np.isfinite(a)):
        raise DataError("matrix has non-finite entries")
    return _factor_dense(np.tril(a) + np.tril(a, -1).T, sigma, k, keep)


def inertia_below(A, shift, kernels=None):
    """Number of eigenvalues of ``A`` strictly below ``shift``.

    Counts the negative pivots of a Bunch-Kaufman LDL^T factorization of
    ``A - shift*I``; no eigenvalues are computed.

    Raises
    ------
    PivotError
        If ``shift`` is exactly an eigenvalue as seen by the factorization.
    """
    f = factor_ldl(A, shift, keep=False, kernels=kernels)
    if f.inertia[1]:
        raise PivotError("zero pivot: shift coincides with an eigenvalue")
    return f.inertia[0]
