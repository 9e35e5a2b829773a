"""Dense symmetric eigensolver: Householder tridiagonalization + implicit QL."""
import numpy as np

from ..errors import CapacityError, ConvergenceError, DataError
from . import _backend
from .matrix import Spectrum, SymmetricMatrix

__all__ = ["eig_dense", "tridiagonalize", "MAX_DENSE"]

MAX_DENSE = 6000

# entries are scaled into [_RMIN, _RMAX] before the iteration, as in LAPACK's
# dsyev; subnormal or huge matrices otherwise defeat the deflation test
_SMLNUM = np.finfo(float).tiny / np.finfo(float).eps
_RMIN, _RMAX = np.sqrt(_SMLNUM), np.sqrt(1.0 / _SMLNUM)


def _as_dense(A):
    if isinstance(A, SymmetricMatrix):
        if A.is_sparse:
            if A.n > MAX_DENSE:
                raise CapacityError(f"n={A.n} exceeds the dense limit {MAX_DENSE}")
            return A.to_dense()
        return A.to_dense()
    a = np.array(A, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DataError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(np.tril(a))):
        raise DataError("matrix has non-finite entries")
    a = np.tril(a)
    return a + np.tril(a, -1).T


def tridiagonalize(A, kernels=None):
    """Return ``(d, e, reflectors, taus)`` with ``A = Q T Q^T``.

    ``d`` and ``e`` are the diagonal and sub-diagonal of ``T`` (``e`` has
    length n with a trailing zero); ``reflectors[i+2:, i]`` and ``taus`` encode
    ``Q = H_0 H_1 ... H_{n-2}`` with ``H_i = I - tau_i v_i v_i^T``.
    """
    k = kernels or _backend.kernels
    a = np.ascontiguousarray(_as_dense(A))
    n = a.shape[0]
    if n > MAX_DENSE:
        raise CapacityError(f"n={n} exceeds the dense limit {MAX_DENSE}")
    d = np.zeros(n)
    e = np.zeros(max(n, 1))
    taus = np.zeros(max(n, 1))
    if n:
        k.householder_tridiagonal(a, d, e, taus)
    e[max(n - 1, 0):] = 0.0
    return d, e[:n] if n else e[:0], a, taus[:n]


def _form_q(a, taus):
    n = a.shape[0]
    q = np.eye(n)
    for i in range(n - 3, -1, -1):
        tau = taus[i]
        if tau == 0.0:
            continue
        v = np.empty(n - i - 1)
        v[0] = 1.0
        v[1:] = a[i + 2:, i]
        blk = q[i + 1:, i + 1:]
        blk -= tau * np.outer(v, v @ blk)
    return q


def eig_dense(A, vectors=False, kernels=None):
    """All eigenvalues (and optionally eigenvectors) of a symmetric matrix.

    Parameters
    ----------
    A : SymmetricMatrix or array_like
        Symmetric matrix; only the lower triangle is read. n <= 6000.
    vectors : bool
        Also return orthonormal eigenvectors in ``Spectrum.vectors``.
    kernels : module, optional
        Kernel backend override (used by the backend comparison tests).

    Returns
    -------
    Spectrum
        Complete, sorted spectrum.

    Raises
    ------
    CapacityError
        If n exceeds 6000.
    DataError
        If the matrix has non-finite entries.
    ConvergenceError
        If the QL iteration stalls (never observed in practice).
    """
    k = kernels or _backend.kernels
    n = A.n if isinstance(A, SymmetricMatrix) else np.shape(A)[0]
    if n > MAX_DENSE:
        raise CapacityError(f"n={n} exceeds the dense limit {MAX_DENSE}")
    a = _as_dense(A)
    if n == 0:
        return Spectrum(np.zeros(0), True, 0)
    anrm = float(np.max(np.abs(a)))
    sigma = 1.0
    if 0.0 < anrm < _RMIN:
        sigma = _RMIN / anrm
    elif anrm > _RMAX:
        sigma = _RMAX / anrm
    if sigma != 1.0:
        a = a * sigma
    d, e, refl, taus = tridiagonalize(a, kernels=k)
    e = np.ascontiguousarray(e, dtype=float).copy()
    if vectors:
        z = np.ascontiguousarray(_form_q(refl, taus))
    else:
        z = np.empty((0, n))
    info = k.tql_implicit(d, e, z)
    if info:
        raise ConvergenceError(f"QL iteration stalled at eigenvalue {info - 1}")
    if sigma != 1.0:
        d = d / sigma
    order = np.argsort(d, kind="stable")
    vecs = z[:, order] if vectors else None
    return Spectrum(d[order], True, n, vectors=vecs)
